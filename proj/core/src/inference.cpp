#include "topocausal/inference.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

namespace topocausal {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Sorts nodes by descending key, ties by ascending id.
template <typename Key>
std::vector<NodeId> by_descending(std::span<const NodeId> nodes, Key key) {
  std::vector<NodeId> out(nodes.begin(), nodes.end());
  std::stable_sort(out.begin(), out.end(), [&](NodeId x, NodeId y) {
    const double kx = key(x);
    const double ky = key(y);
    if (kx != ky) return kx > ky;
    return x < y;
  });
  return out;
}

// Conditional weight of source -> target given one variable, in the units of
// the weight matrix. Undefined Fisher values count as 0.
double conditional_weight(const Dataset& ds, Measure measure, NodeId source, NodeId target,
                          NodeId given) {
  if (measure == Measure::kNetInfluence) return conditional_weight_ni(ds, source, target, given);
  return fisher_weight(ds, target, source, given).or_zero();
}

std::vector<FirstOrderRemoval> first_constraint_dag(Network& net, const Dataset& ds,
                                                    const WeightMatrix& weights, double epsilon,
                                                    std::size_t& tests) {
  std::vector<FirstOrderRemoval> removed;
  const Measure measure = weights.measure();
  for (NodeId child = 0; child < net.n_nodes(); ++child) {
    if (net.in_degree(child) < 2) continue;
    auto strength = [&](NodeId p) { return weights.weight(p, child); };
    const std::vector<NodeId> order = by_descending(net.in_neighbors(child), strength);
    for (NodeId parent : order) {
      if (!net.has_edge(parent, child)) continue;
      const std::vector<NodeId> others = by_descending(net.in_neighbors(child), strength);
      for (NodeId other : others) {
        if (other == parent) continue;
        const double m = conditional_weight(ds, measure, parent, child, other);
        ++tests;
        if (m <= epsilon) {
          net.remove_edge(parent, child);
          removed.push_back({{parent, child}, other, m});
          break;
        }
      }
    }
  }
  return removed;
}

std::vector<FirstOrderRemoval> first_constraint_skeleton(Network& net, const Dataset& ds,
                                                         const WeightMatrix& weights, double epsilon,
                                                         std::size_t& tests) {
  std::vector<FirstOrderRemoval> removed;
  const Measure measure = weights.measure();
  for (NodeId a = 0; a < net.n_nodes(); ++a) {
    auto strength = [&](NodeId v) { return weights.pair_weight(v, a); };
    const std::vector<NodeId> order = by_descending(net.neighbors(a), strength);
    for (NodeId b : order) {
      if (b < a || !net.has_edge(a, b)) continue;
      std::vector<NodeId> common;
      const auto na = net.neighbors(a);
      const auto nb = net.neighbors(b);
      std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
      for (NodeId k : by_descending(common, strength)) {
        double m = conditional_weight(ds, measure, a, b, k);
        if (measure == Measure::kNetInfluence) m = std::max(m, conditional_weight(ds, measure, b, a, k));
        ++tests;
        if (m <= epsilon) {
          net.remove_edge(a, b);
          removed.push_back({{a, b}, k, m});
          break;
        }
      }
    }
  }
  return removed;
}

}  // namespace

std::string_view to_string(InferenceMode m) {
  return m == InferenceMode::kDag ? "dag" : "skeleton";
}

InferenceMode parse_mode(std::string_view text) {
  if (text == "dag") return InferenceMode::kDag;
  if (text == "skeleton") return InferenceMode::kSkeleton;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected dag or skeleton)");
}

void validate(const InferenceConfig& cfg) {
  if (cfg.max_order < 0 || cfg.max_order > 1)
    throw std::invalid_argument("max_order must be 0 or 1");
}

Network zeroth_constraint(const WeightMatrix& weights, const Threshold& eps, InferenceMode mode) {
  const std::size_t n = weights.size();
  std::vector<char> dropped(n, 0);
  for (NodeId v : eps.dropped_nodes) dropped.at(v) = 1;

  Network net(n, graph_mode(mode));
  for (NodeId a = 0; a < n; ++a) {
    if (dropped[a]) continue;
    for (NodeId b = 0; b < n; ++b) {
      if (a == b || dropped[b]) continue;
      if (mode == InferenceMode::kDag) {
        if (weights.weight(a, b) > eps.epsilon) net.add_edge(a, b);
      } else if (a < b && weights.pair_weight(a, b) > eps.epsilon) {
        net.add_edge(a, b);
      }
    }
  }
  return net;
}

std::vector<FirstOrderRemoval> first_constraint(Network& net, const Dataset& ds,
                                                const WeightMatrix& weights, const Threshold& eps,
                                                std::size_t* tests) {
  if (net.n_nodes() != ds.n_vars() || weights.size() != ds.n_vars())
    throw std::invalid_argument("network, dataset and weights disagree on the variable count");
  std::size_t count = 0;
  auto removed = net.directed() ? first_constraint_dag(net, ds, weights, eps.epsilon, count)
                                : first_constraint_skeleton(net, ds, weights, eps.epsilon, count);
  if (tests != nullptr) *tests = count;
  return removed;
}

InferenceResult infer_from_weights(const Dataset& ds, const WeightMatrix& weights,
                                   const InferenceConfig& cfg) {
  validate(cfg);
  if (weights.measure() != cfg.measure) throw std::invalid_argument("weight matrix measure mismatch");
  InferenceResult result;

  auto start = Clock::now();
  result.threshold = find_threshold(weights, cfg.threshold);
  result.stats.t_threshold_s = seconds_since(start);

  start = Clock::now();
  result.zeroth = zeroth_constraint(weights, result.threshold, cfg.mode);
  result.network = result.zeroth;
  if (cfg.max_order >= 1) {
    result.removed_first_order =
        first_constraint(result.network, ds, weights, result.threshold, &result.stats.conditional_tests);
  }
  result.stats.t_constrain_s = seconds_since(start);
  result.stats.t_total_s = result.stats.t_threshold_s + result.stats.t_constrain_s;

  result.stats.zeroth_edges = result.zeroth.edge_count();
  result.stats.final_edges = result.network.edge_count();
  result.stats.first_order_removed = result.removed_first_order.size();
  if (result.network.directed()) {
    result.acyclic = is_acyclic(result.network);
    result.two_cycles = count_two_cycles(result.network);
  }
  return result;
}

InferenceResult infer(const Dataset& ds, const InferenceConfig& cfg) {
  validate(cfg);
  if (ds.n_vars() < 2) throw std::invalid_argument("inference needs at least 2 variables");
  const auto start = Clock::now();
  const WeightMatrix weights = weight_matrix(ds, cfg.measure, cfg.workers);
  const double t_weights = seconds_since(start);
  InferenceResult result = infer_from_weights(ds, weights, cfg);
  result.stats.t_weights_s = t_weights;
  result.stats.t_total_s = seconds_since(start);
  return result;
}

}  // namespace topocausal
