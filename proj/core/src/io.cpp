#include "topocausal/io.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "topocausal/errors.hpp"

namespace topocausal {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json threshold_object(const Threshold& t, std::span<const std::string> names) {
  json dropped = json::array();
  for (NodeId v : t.dropped_nodes) dropped.push_back(names[v]);
  return {
      {"epsilon", t.epsilon},
      {"method", to_string(t.method)},
      {"fell_back", t.fell_back},
      {"knee_index", t.knee_index ? json(*t.knee_index) : json(nullptr)},
      {"dropped_nodes", dropped},
  };
}

}  // namespace

void write_weight_matrix(const WeightMatrix& weights, const Dataset& ds, std::ostream& out) {
  if (weights.size() != ds.n_vars()) throw std::invalid_argument("weight matrix and dataset sizes differ");
  const bool ni = weights.measure() == Measure::kNetInfluence;
  out << "src\tdst\tweight";
  if (ni) out << "\targ_j\targ_i";
  out << '\n';
  std::ostringstream num;
  num << std::setprecision(17);
  for (std::size_t s = 0; s < weights.size(); ++s) {
    for (std::size_t t = 0; t < weights.size(); ++t) {
      if (s == t) continue;
      const EdgeWeight& w = weights.at(s, t);
      num.str("");
      num << w.weight;
      out << ds.variable(s).name << '\t' << ds.variable(t).name << '\t' << num.str();
      if (ni) {
        out << '\t';
        if (w.argmax) out << ds.variable(s).alphabet[w.argmax->first];
        out << '\t';
        if (w.argmax) out << ds.variable(t).alphabet[w.argmax->second];
      }
      out << '\n';
    }
  }
}

void write_curve_csv(const LccCurve& curve, std::ostream& out) {
  out << "edges_removed,lcc_size\n";
  for (const CurvePoint& p : curve.points) out << p.edges_removed << ',' << p.lcc_size << '\n';
}

std::string threshold_json(const Threshold& t, std::span<const std::string> names) {
  return threshold_object(t, names).dump(2);
}

std::string inference_report_json(const InferenceResult& result, const InferenceConfig& cfg,
                                  std::span<const std::string> names) {
  json removed = json::array();
  for (const FirstOrderRemoval& r : result.removed_first_order) {
    removed.push_back({{"src", names[r.edge.from]},
                       {"dst", names[r.edge.to]},
                       {"given", names[r.given]},
                       {"weight", r.weight}});
  }
  const bool dag = cfg.mode == InferenceMode::kDag;
  json report = {
      {"config",
       {{"measure", to_string(cfg.measure)},
        {"threshold", to_string(cfg.threshold)},
        {"mode", to_string(cfg.mode)},
        {"max_order", cfg.max_order}}},
      {"threshold", threshold_object(result.threshold, names)},
      {"stats",
       {{"zeroth_edges", result.stats.zeroth_edges},
        {"final_edges", result.stats.final_edges},
        {"first_order_removed", result.stats.first_order_removed},
        {"conditional_tests", result.stats.conditional_tests}}},
      {"times_s",
       {{"weights", result.stats.t_weights_s},
        {"threshold", result.stats.t_threshold_s},
        {"constrain", result.stats.t_constrain_s},
        {"total", result.stats.t_total_s}}},
      {"removed_first_order", removed},
      {"acyclic", dag ? json(result.acyclic) : json(nullptr)},
      {"two_cycles", dag ? json(result.two_cycles) : json(nullptr)},
  };
  return report.dump(2);
}

std::string eval_report_json(const ConfusionCounts& c) {
  const auto m = mcc(c);
  json report = {
      {"mode", to_string(c.mode)},
      {"tp", c.tp},
      {"fp", c.fp},
      {"fn", c.fn},
      {"tn", c.tn},
      {"fpr", optional_number(fpr(c))},
      {"fnr", optional_number(fnr(c))},
      {"mcc", optional_number(m)},
      {"mcc_defined", m.has_value()},
  };
  return report.dump(2);
}

std::string ground_truth_json(const GroundTruth& gt, std::span<const std::string> names) {
  if (names.size() != gt.n_nodes()) throw std::invalid_argument("name count does not match node count");
  json nodes = json::array();
  for (NodeId v = 0; v < gt.n_nodes(); ++v) {
    json labels = json::array();
    for (std::size_t s = 0; s < gt.states[v]; ++s) labels.push_back(std::to_string(s));
    json parents = json::array();
    for (NodeId p : gt.cpts[v].parents) parents.push_back(names[p]);
    nodes.push_back({{"name", names[v]}, {"states", labels}, {"parents", parents}, {"cpt", gt.cpts[v].rows}});
  }
  json edges = json::array();
  for (const Edge& e : gt.dag.edges()) edges.push_back({names[e.from], names[e.to]});
  json doc = {{"seed", gt.seed}, {"nodes", nodes}, {"edges", edges}};
  return doc.dump(2);
}

GroundTruth parse_ground_truth(std::istream& in, std::vector<std::string>* names) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(std::string("ground truth is not valid JSON: ") + e.what());
  }
  try {
    const json& nodes = doc.at("nodes");
    const std::size_t n = nodes.size();
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::string> node_names;
    for (NodeId v = 0; v < n; ++v) {
      node_names.push_back(nodes[v].at("name").get<std::string>());
      if (!ids.emplace(node_names.back(), v).second)
        throw DataError("duplicate node name '" + node_names.back() + "'");
    }
    auto id_of = [&](const std::string& name) {
      const auto it = ids.find(name);
      if (it == ids.end()) throw DataError("unknown node '" + name + "'");
      return it->second;
    };

    GroundTruth gt;
    gt.seed = doc.value("seed", std::uint64_t{0});
    gt.dag = Network(n, GraphMode::kDirected);
    for (const json& e : doc.at("edges")) {
      if (e.size() != 2) throw DataError("edge entries must be [src, dst]");
      gt.dag.add_edge(id_of(e[0].get<std::string>()), id_of(e[1].get<std::string>()));
    }
    gt.states.resize(n);
    gt.cpts.resize(n);
    for (NodeId v = 0; v < n; ++v) {
      gt.states[v] = nodes[v].at("states").size();
      Cpt& cpt = gt.cpts[v];
      for (const json& p : nodes[v].at("parents")) cpt.parents.push_back(id_of(p.get<std::string>()));
      cpt.rows = nodes[v].at("cpt").get<std::vector<std::vector<double>>>();
    }
    for (NodeId v = 0; v < n; ++v) {
      for (NodeId p : gt.cpts[v].parents) gt.cpts[v].parent_states.push_back(gt.states[p]);
    }
    validate(gt);
    if (names != nullptr) *names = std::move(node_names);
    return gt;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed ground truth: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed ground truth: ") + e.what());
  }
}

}  // namespace topocausal
