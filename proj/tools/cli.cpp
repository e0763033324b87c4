#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "topocausal/bench.hpp"
#include "topocausal/dataset.hpp"
#include "topocausal/errors.hpp"
#include "topocausal/eval.hpp"
#include "topocausal/inference.hpp"
#include "topocausal/io.hpp"
#include "topocausal/measures.hpp"
#include "topocausal/synth.hpp"
#include "topocausal/threshold.hpp"

namespace topocausal::cli {

namespace {

const std::vector<std::string> kMeasures{"ni", "fisher"};
const std::vector<std::string> kThresholds{"knee", "connected"};
const std::vector<std::string> kModes{"dag", "skeleton"};

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open '" + path + "' for writing");
  return f;
}

// Writes through `write` to `path`, or to `out` when path is empty or "-".
template <typename F>
void emit(const std::string& path, std::ostream& out, F&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream f = open_output(path);
  write(f);
  if (!f) throw DataError("failed writing '" + path + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

struct InferArgs {
  std::string data, measure = "ni", threshold = "knee", mode = "dag";
  int max_order = 1;
  std::string out, report, weights;
  unsigned workers = 0;
};

struct SynthArgs {
  int method = 2;
  std::size_t nodes = 60;
  double mean_degree = 3.0;
  std::size_t rows = 10000;
  std::uint64_t seed = 1;
  double concentration = 1.0;
  std::string out = "synth.csv", truth = "synth.truth.json";
};

struct CurveArgs {
  std::string data, measure = "ni", threshold = "knee", out, json;
  unsigned workers = 0;
};

struct EvalArgs {
  std::string truth, inferred, mode = "dag", out;
};

struct BenchArgs {
  std::vector<std::size_t> nodes{30, 60};
  std::vector<double> degrees{3.0};
  std::size_t rows = 10000;
  int method = 2;
  std::size_t reps = 30;
  std::uint64_t seed = 1;
  double concentration = 1.0;
  std::string algorithms = "all", out, summary;
  unsigned workers = 0;
};

int do_infer(const InferArgs& a, std::ostream& out, std::ostream& err) {
  InferenceConfig cfg;
  cfg.measure = parse_measure(a.measure);
  cfg.threshold = parse_threshold_method(a.threshold);
  cfg.mode = parse_mode(a.mode);
  cfg.max_order = a.max_order;
  cfg.workers = a.workers;
  validate(cfg);

  const Dataset ds = load_csv(a.data);
  const WeightMatrix weights = weight_matrix(ds, cfg.measure, cfg.workers);
  if (!a.weights.empty()) emit(a.weights, out, [&](std::ostream& o) { write_weight_matrix(weights, ds, o); });

  InferenceResult result = infer_from_weights(ds, weights, cfg);
  const std::vector<std::string> names = ds.names();
  emit(a.out, out, [&](std::ostream& o) { write_edge_list(result.network, names, o); });
  if (!a.report.empty()) {
    emit(a.report, out, [&](std::ostream& o) { o << inference_report_json(result, cfg, names) << '\n'; });
  }
  err << "epsilon " << result.threshold.epsilon << " (" << to_string(result.threshold.method)
      << (result.threshold.fell_back ? ", knee fallback" : "") << "), " << result.stats.zeroth_edges
      << " zeroth-order edges, " << result.stats.final_edges << " final edges\n";
  if (cfg.mode == InferenceMode::kDag && !result.acyclic) {
    err << "note: output contains cycles (" << result.two_cycles << " two-cycles)\n";
  }
  return kOk;
}

int do_synth(const SynthArgs& a, std::ostream&, std::ostream& err) {
  GenSpec spec;
  spec.method = a.method;
  spec.n_nodes = a.nodes;
  spec.mean_degree = a.mean_degree;
  spec.n_rows = a.rows;
  spec.seed = a.seed;
  spec.concentration = a.concentration;
  validate(spec);
  auto [truth, ds] = generate(spec);
  {
    std::ofstream f = open_output(a.out);
    write_csv(ds, f);
  }
  {
    std::ofstream f = open_output(a.truth);
    f << ground_truth_json(truth, ds.names()) << '\n';
  }
  err << "wrote " << ds.n_rows() << " rows x " << ds.n_vars() << " variables to " << a.out << ", "
      << truth.dag.edge_count() << " true edges to " << a.truth << '\n';
  return kOk;
}

int do_curve(const CurveArgs& a, std::ostream& out, std::ostream& err) {
  const Measure measure = parse_measure(a.measure);
  const ThresholdMethod method = parse_threshold_method(a.threshold);
  const Dataset ds = load_csv(a.data);
  const WeightMatrix weights = weight_matrix(ds, measure, a.workers);
  const RankedEdges ranked = rank_edges(weights);
  const LccCurve curve = lcc_curve(ranked, ds.n_vars());
  emit(a.out, out, [&](std::ostream& o) { write_curve_csv(curve, o); });
  if (!a.json.empty()) {
    const Threshold t = method == ThresholdMethod::kKnee ? knee_threshold(curve, ranked)
                                                         : connected_threshold(ranked, ds.n_vars());
    emit(a.json, out, [&](std::ostream& o) { o << threshold_json(t, ds.names()) << '\n'; });
    err << "epsilon " << t.epsilon << '\n';
  }
  return kOk;
}

int do_eval(const EvalArgs& a, std::ostream& out, std::ostream&) {
  const InferenceMode mode = parse_mode(a.mode);
  std::vector<std::string> names;
  GroundTruth truth;
  {
    std::ifstream f(a.truth);
    if (!f) throw DataError("cannot open '" + a.truth + "'");
    truth = parse_ground_truth(f, &names);
  }
  Network inferred;
  {
    std::ifstream f(a.inferred);
    if (!f) throw DataError("cannot open '" + a.inferred + "'");
    inferred = read_edge_list(f, names, graph_mode(mode));
  }
  const ConfusionCounts c = confusion(truth.dag, inferred, mode);
  emit(a.out, out, [&](std::ostream& o) { o << eval_report_json(c) << '\n'; });
  return kOk;
}

int do_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<AlgorithmConfig> configs;
  if (a.algorithms == "all") {
    configs = all_algorithms();
  } else {
    for (const std::string& label : split_list(a.algorithms)) configs.push_back(parse_algorithm(label));
  }
  if (configs.empty()) throw std::invalid_argument("no algorithms selected");

  std::vector<GenSpec> sweep;
  for (std::size_t n : a.nodes) {
    for (double d : a.degrees) {
      GenSpec spec;
      spec.n_nodes = n;
      spec.mean_degree = d;
      spec.n_rows = a.rows;
      spec.method = a.method;
      spec.concentration = a.concentration;
      validate(spec);
      sweep.push_back(spec);
    }
  }
  const std::vector<BenchRun> runs = bench(sweep, configs, a.reps, a.seed, a.workers);
  emit(a.out, out, [&](std::ostream& o) { write_bench_csv(runs, o); });
  if (!a.summary.empty()) {
    emit(a.summary, out, [&](std::ostream& o) { write_bench_summary(aggregate(runs), o); });
  }
  const auto failed = std::count_if(runs.begin(), runs.end(), [](const BenchRun& r) { return !r.error.empty(); });
  err << runs.size() << " runs, " << failed << " failed\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal network inference with topological thresholds", "topocausal"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "topocausal 0.1.0");

  InferArgs ia;
  CLI::App* infer_cmd = app.add_subcommand("infer", "Infer a network from a discrete CSV dataset");
  infer_cmd->add_option("--data", ia.data, "Input CSV (header row of variable names)")->required()->check(CLI::ExistingFile);
  infer_cmd->add_option("--measure", ia.measure, "Influence measure")->check(CLI::IsMember(kMeasures))->capture_default_str();
  infer_cmd->add_option("--threshold", ia.threshold, "Threshold method")->check(CLI::IsMember(kThresholds))->capture_default_str();
  infer_cmd->add_option("--mode", ia.mode, "Output a DAG or an undirected skeleton")->check(CLI::IsMember(kModes))->capture_default_str();
  infer_cmd->add_option("--max-order", ia.max_order, "Highest conditioning order (0 or 1)")->check(CLI::Range(0, 1))->capture_default_str();
  infer_cmd->add_option("--out", ia.out, "Edge list TSV (default: standard output)");
  infer_cmd->add_option("--report", ia.report, "JSON report with threshold, stage counts and timings");
  infer_cmd->add_option("--weights", ia.weights, "Pairwise weight matrix TSV");
  infer_cmd->add_option("--workers", ia.workers, "Worker threads (0: $TOPOCAUSAL_WORKERS or all cores)")->capture_default_str();

  SynthArgs sa;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a random DAG, CPTs and a sampled dataset");
  synth_cmd->add_option("--method", sa.method, "1: single-sink recursive growth, 2: random triangular adjacency")->check(CLI::IsMember({1, 2}))->capture_default_str();
  synth_cmd->add_option("--nodes", sa.nodes, "Number of variables")->capture_default_str();
  synth_cmd->add_option("--mean-degree", sa.mean_degree, "Target mean total degree")->capture_default_str();
  synth_cmd->add_option("--rows", sa.rows, "Number of sampled rows")->capture_default_str();
  synth_cmd->add_option("--seed", sa.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--concentration", sa.concentration, "Dirichlet concentration of CPT rows")->capture_default_str();
  synth_cmd->add_option("--out", sa.out, "Dataset CSV")->capture_default_str();
  synth_cmd->add_option("--truth", sa.truth, "Ground-truth JSON")->capture_default_str();

  CurveArgs ca;
  CLI::App* curve_cmd = app.add_subcommand("curve", "Export the LCC-size curve and the selected threshold");
  curve_cmd->add_option("--data", ca.data, "Input CSV")->required()->check(CLI::ExistingFile);
  curve_cmd->add_option("--measure", ca.measure, "Influence measure")->check(CLI::IsMember(kMeasures))->capture_default_str();
  curve_cmd->add_option("--threshold", ca.threshold, "Threshold method for the JSON sidecar")->check(CLI::IsMember(kThresholds))->capture_default_str();
  curve_cmd->add_option("--out", ca.out, "Curve CSV edges_removed,lcc_size (default: standard output)");
  curve_cmd->add_option("--json", ca.json, "JSON sidecar with epsilon, method and dropped nodes");
  curve_cmd->add_option("--workers", ca.workers, "Worker threads (0: $TOPOCAUSAL_WORKERS or all cores)")->capture_default_str();

  EvalArgs ea;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score an inferred edge list against a ground truth");
  eval_cmd->add_option("--truth", ea.truth, "Ground-truth JSON written by synth")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--inferred", ea.inferred, "Edge list TSV written by infer")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--mode", ea.mode, "Compare ordered (dag) or unordered (skeleton) pairs")->check(CLI::IsMember(kModes))->capture_default_str();
  eval_cmd->add_option("--out", ea.out, "JSON report (default: standard output)");

  BenchArgs ba;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a repetition sweep over synthetic networks");
  bench_cmd->add_option("--nodes", ba.nodes, "Network sizes")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--mean-degree", ba.degrees, "Mean degrees")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--rows", ba.rows, "Rows per dataset")->capture_default_str();
  bench_cmd->add_option("--method", ba.method, "Generation method")->check(CLI::IsMember({1, 2}))->capture_default_str();
  bench_cmd->add_option("--reps", ba.reps, "Repetitions per cell")->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--seed", ba.seed, "Base seed")->capture_default_str();
  bench_cmd->add_option("--concentration", ba.concentration, "Dirichlet concentration of CPT rows")->capture_default_str();
  bench_cmd->add_option("--algorithms", ba.algorithms, "Comma list such as ni-knee-dag,pc-dag, or all")->capture_default_str();
  bench_cmd->add_option("--out", ba.out, "Per-run CSV (default: standard output)");
  bench_cmd->add_option("--summary", ba.summary, "Aggregated JSON summary");
  bench_cmd->add_option("--workers", ba.workers, "Worker threads (0: $TOPOCAUSAL_WORKERS or all cores)")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*infer_cmd) return do_infer(ia, out, err);
    if (*synth_cmd) return do_synth(sa, out, err);
    if (*curve_cmd) return do_curve(ca, out, err);
    if (*eval_cmd) return do_eval(ea, out, err);
    return do_bench(ba, out, err);
  } catch (const AlgorithmError& e) {
    err << "error: " << e.what() << '\n';
    return kAlgorithmError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace topocausal::cli
