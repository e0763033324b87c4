#include "topocausal/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "topocausal/parallel.hpp"

namespace topocausal {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  return parts;
}

void run_one(const GroundTruth& truth, const Dataset& ds, BenchRun& run) {
  const AlgorithmConfig& cfg = run.config;
  const InferenceMode mode = cfg.mode();
  try {
    Network inferred;
    if (cfg.kind == AlgorithmConfig::Kind::kPc) {
      const auto start = Clock::now();
      inferred = pc_baseline(ds, cfg.pc, mode);
      run.stats.t_total_s = std::chrono::duration<double>(Clock::now() - start).count();
      run.stats.final_edges = inferred.edge_count();
    } else {
      InferenceResult result = infer(ds, cfg.inference);
      run.stats = result.stats;
      if (mode == InferenceMode::kDag) run.spurious = spurious_stats(truth.dag, result);
      inferred = std::move(result.network);
    }
    run.counts = confusion(truth.dag, inferred, mode);
    run.fpr = fpr(run.counts);
    run.fnr = fnr(run.counts);
    run.mcc = mcc(run.counts);
  } catch (const std::exception& e) {
    run.error = e.what();
    if (run.error.empty()) run.error = "unknown error";
  }
}

void add(Summary& s, double v) {
  if (s.count == 0) {
    s.min = v;
    s.max = v;
  } else {
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean += v;
  ++s.count;
}

void finish(Summary& s) {
  if (s.count > 0) s.mean /= static_cast<double>(s.count);
}

std::string spec_key(const GenSpec& s) {
  std::ostringstream os;
  os << s.n_nodes << '/' << std::bit_cast<std::uint64_t>(s.mean_degree) << '/' << s.method << '/'
     << s.n_rows << '/' << std::bit_cast<std::uint64_t>(s.concentration);
  return os.str();
}

nlohmann::json to_json(const Summary& s) {
  if (s.count == 0) return {{"mean", nullptr}, {"min", nullptr}, {"max", nullptr}, {"count", 0}};
  return {{"mean", s.mean}, {"min", s.min}, {"max", s.max}, {"count", s.count}};
}

std::string csv_value(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os << std::setprecision(12) << *v;
  return os.str();
}

}  // namespace

AlgorithmConfig AlgorithmConfig::topological(Measure m, ThresholdMethod t, InferenceMode mode) {
  AlgorithmConfig c;
  c.kind = Kind::kTopological;
  c.inference.measure = m;
  c.inference.threshold = t;
  c.inference.mode = mode;
  c.inference.max_order = 1;
  c.inference.workers = 1;
  return c;
}

AlgorithmConfig AlgorithmConfig::baseline(InferenceMode mode, double alpha) {
  AlgorithmConfig c;
  c.kind = Kind::kPc;
  c.inference.mode = mode;
  c.pc.alpha = alpha;
  return c;
}

std::string AlgorithmConfig::measure_label() const {
  return kind == Kind::kPc ? "pc" : std::string(to_string(inference.measure));
}

std::string AlgorithmConfig::threshold_label() const {
  return kind == Kind::kPc ? "alpha" : std::string(to_string(inference.threshold));
}

std::string AlgorithmConfig::label() const {
  if (kind == Kind::kPc) return "pc-" + std::string(to_string(mode()));
  return measure_label() + "-" + threshold_label() + "-" + std::string(to_string(mode()));
}

AlgorithmConfig parse_algorithm(const std::string& label) {
  const auto parts = split(label, '-');
  if (parts.size() == 2 && parts[0] == "pc") return AlgorithmConfig::baseline(parse_mode(parts[1]));
  if (parts.size() == 3)
    return AlgorithmConfig::topological(parse_measure(parts[0]), parse_threshold_method(parts[1]),
                                        parse_mode(parts[2]));
  throw std::invalid_argument("unknown algorithm '" + label +
                              "' (expected <ni|fisher>-<connected|knee>-<dag|skeleton> or pc-<dag|skeleton>)");
}

std::vector<AlgorithmConfig> all_algorithms() {
  std::vector<AlgorithmConfig> configs;
  for (InferenceMode mode : {InferenceMode::kDag, InferenceMode::kSkeleton}) {
    for (Measure m : {Measure::kNetInfluence, Measure::kFisher}) {
      for (ThresholdMethod t : {ThresholdMethod::kConnected, ThresholdMethod::kKnee}) {
        configs.push_back(AlgorithmConfig::topological(m, t, mode));
      }
    }
    configs.push_back(AlgorithmConfig::baseline(mode));
  }
  return configs;
}

std::uint64_t run_seed(std::uint64_t base_seed, const GenSpec& spec, std::size_t rep) {
  std::uint64_t h = mix_seed(base_seed, spec.n_nodes);
  h = mix_seed(h, std::bit_cast<std::uint64_t>(spec.mean_degree));
  h = mix_seed(h, static_cast<std::uint64_t>(spec.method));
  h = mix_seed(h, spec.n_rows);
  h = mix_seed(h, std::bit_cast<std::uint64_t>(spec.concentration));
  return mix_seed(h, rep);
}

std::vector<BenchRun> bench(const std::vector<GenSpec>& sweep, const std::vector<AlgorithmConfig>& configs,
                            std::size_t reps, std::uint64_t base_seed, unsigned workers) {
  if (sweep.empty()) throw std::invalid_argument("bench needs a nonempty sweep");
  if (configs.empty()) throw std::invalid_argument("bench needs at least one algorithm");
  for (const GenSpec& s : sweep) validate(s);

  const std::size_t tasks = sweep.size() * reps;
  std::vector<BenchRun> runs(tasks * configs.size());
  parallel_for(tasks, workers, [&](std::size_t task) {
    const std::size_t spec_idx = task / reps;
    const std::size_t rep = task % reps;
    GenSpec spec = sweep[spec_idx];
    spec.seed = run_seed(base_seed, sweep[spec_idx], rep);
    std::optional<std::pair<GroundTruth, Dataset>> instance;
    std::string error;
    try {
      instance = generate(spec);
    } catch (const std::exception& e) {
      error = std::string("generation failed: ") + e.what();
    }
    for (std::size_t c = 0; c < configs.size(); ++c) {
      BenchRun& run = runs[task * configs.size() + c];
      run.spec = spec;
      run.config = configs[c];
      run.config.inference.workers = 1;
      run.rep = rep;
      if (instance) {
        run_one(instance->first, instance->second, run);
      } else {
        run.error = error;
      }
    }
  });
  return runs;
}

std::vector<BenchCell> aggregate(const std::vector<BenchRun>& runs) {
  std::vector<BenchCell> cells;
  std::map<std::string, std::size_t> index;
  for (const BenchRun& run : runs) {
    const std::string key = spec_key(run.spec) + "|" + run.config.label();
    auto [it, inserted] = index.try_emplace(key, cells.size());
    if (inserted) {
      BenchCell cell;
      cell.spec = run.spec;
      cell.spec.seed = 0;
      cell.config = run.config;
      cells.push_back(cell);
    }
    BenchCell& cell = cells[it->second];
    ++cell.runs;
    if (!run.error.empty()) {
      ++cell.failures;
      continue;
    }
    if (run.fpr) add(cell.fpr, *run.fpr);
    if (run.fnr) add(cell.fnr, *run.fnr);
    if (run.mcc) add(cell.mcc, *run.mcc);
    add(cell.t_weights_s, run.stats.t_weights_s);
    add(cell.t_threshold_s, run.stats.t_threshold_s);
    add(cell.t_constrain_s, run.stats.t_constrain_s);
    add(cell.t_total_s, run.stats.t_total_s);
  }
  for (BenchCell& cell : cells) {
    for (Summary* s : {&cell.fpr, &cell.fnr, &cell.mcc, &cell.t_weights_s, &cell.t_threshold_s,
                       &cell.t_constrain_s, &cell.t_total_s}) {
      finish(*s);
    }
  }
  for (BenchCell& cell : cells) {
    const auto pc = index.find(spec_key(cell.spec) + "|pc-" + std::string(to_string(cell.config.mode())));
    if (pc == index.end()) continue;
    const Summary& base = cells[pc->second].t_total_s;
    if (base.count > 0 && base.mean > 0.0 && cell.t_total_s.count > 0)
      cell.time_over_pc = cell.t_total_s.mean / base.mean;
  }
  return cells;
}

void write_bench_csv(const std::vector<BenchRun>& runs, std::ostream& out) {
  out << "method,measure,threshold,mode,n_nodes,mean_degree,n_rows,rep,fpr,fnr,mcc,"
         "t_weights_s,t_threshold_s,t_constrain_s,t_total_s,status\n";
  for (const BenchRun& r : runs) {
    std::string status = r.error.empty() ? "ok" : r.error;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << r.spec.method << ',' << r.config.measure_label() << ',' << r.config.threshold_label() << ','
        << to_string(r.config.mode()) << ',' << r.spec.n_nodes << ',' << r.spec.mean_degree << ','
        << r.spec.n_rows << ',' << r.rep << ',' << csv_value(r.fpr) << ',' << csv_value(r.fnr) << ','
        << csv_value(r.mcc) << ',' << csv_value(r.stats.t_weights_s) << ','
        << csv_value(r.stats.t_threshold_s) << ',' << csv_value(r.stats.t_constrain_s) << ','
        << csv_value(r.stats.t_total_s) << ',' << status << '\n';
  }
}

void write_bench_summary(const std::vector<BenchCell>& cells, std::ostream& out) {
  nlohmann::json doc = nlohmann::json::array();
  for (const BenchCell& c : cells) {
    doc.push_back({
        {"method", c.spec.method},
        {"measure", c.config.measure_label()},
        {"threshold", c.config.threshold_label()},
        {"mode", to_string(c.config.mode())},
        {"algorithm", c.config.label()},
        {"n_nodes", c.spec.n_nodes},
        {"mean_degree", c.spec.mean_degree},
        {"n_rows", c.spec.n_rows},
        {"runs", c.runs},
        {"failures", c.failures},
        {"fpr", to_json(c.fpr)},
        {"fnr", to_json(c.fnr)},
        {"mcc", to_json(c.mcc)},
        {"t_weights_s", to_json(c.t_weights_s)},
        {"t_threshold_s", to_json(c.t_threshold_s)},
        {"t_constrain_s", to_json(c.t_constrain_s)},
        {"t_total_s", to_json(c.t_total_s)},
        {"time_over_pc", c.time_over_pc ? nlohmann::json(*c.time_over_pc) : nlohmann::json(nullptr)},
    });
  }
  out << doc.dump(2) << '\n';
}

}  // namespace topocausal
