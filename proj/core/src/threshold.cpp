#include "topocausal/threshold.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "topocausal/errors.hpp"
#include "topocausal/union_find.hpp"

namespace topocausal {

namespace {

constexpr double kKneeTolerance = 1e-12;

// True when the pairs heavier than epsilon connect all n nodes.
bool connected_above(const RankedEdges& ranked, std::size_t n, double epsilon) {
  if (n <= 1) return true;
  UnionFind uf(n);
  for (const RankedEdge& e : ranked) {
    if (!(e.weight > epsilon)) break;
    if (uf.unite(e.a, e.b) && uf.set_count() == 1) return true;
  }
  return uf.set_count() == 1;
}

std::vector<NodeId> outside_lcc(const RankedEdges& ranked, std::size_t n, double epsilon) {
  Network kept(n, GraphMode::kUndirected);
  for (const RankedEdge& e : ranked) {
    if (!(e.weight > epsilon)) break;
    kept.add_edge(e.a, e.b);
  }
  const Component main = lcc(kept);
  std::vector<NodeId> dropped;
  std::size_t m = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (m < main.members.size() && main.members[m] == v) {
      ++m;
    } else {
      dropped.push_back(v);
    }
  }
  return dropped;
}

}  // namespace

RankedEdges rank_edges(const WeightMatrix& weights) {
  RankedEdges ranked;
  const std::size_t n = weights.size();
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      const double w = weights.pair_weight(a, b);
      if (w > 0.0) ranked.push_back({a, b, w});
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedEdge& x, const RankedEdge& y) {
    if (x.weight != y.weight) return x.weight > y.weight;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  return ranked;
}

LccCurve lcc_curve(const RankedEdges& ranked, std::size_t n_nodes) {
  const std::size_t e = ranked.size();
  // lcc_with[k]: LCC size with the k strongest edges present.
  std::vector<std::size_t> lcc_with(e + 1);
  UnionFind uf(n_nodes);
  lcc_with[0] = uf.largest();
  for (std::size_t k = 0; k < e; ++k) {
    uf.unite(ranked[k].a, ranked[k].b);
    lcc_with[k + 1] = uf.largest();
  }
  LccCurve curve;
  curve.n_nodes = n_nodes;
  curve.points.reserve(e + 1);
  for (std::size_t removed = 0; removed <= e; ++removed) {
    curve.points.push_back({removed, lcc_with[e - removed]});
  }
  return curve;
}

LccCurve lcc_curve(const WeightMatrix& weights) {
  if (weights.size() < 2) throw std::invalid_argument("lcc_curve needs at least 2 variables");
  return lcc_curve(rank_edges(weights), weights.size());
}

std::string_view to_string(ThresholdMethod m) {
  return m == ThresholdMethod::kConnected ? "connected" : "knee";
}

ThresholdMethod parse_threshold_method(std::string_view text) {
  if (text == "connected") return ThresholdMethod::kConnected;
  if (text == "knee") return ThresholdMethod::kKnee;
  throw std::invalid_argument("unknown threshold method '" + std::string(text) +
                              "' (expected connected or knee)");
}

Threshold connected_threshold(const RankedEdges& ranked, std::size_t n_nodes) {
  if (!connected_above(ranked, n_nodes, 0.0))
    throw AlgorithmError(
        "no connected threshold: the weight graph is disconnected even with every positive-weight "
        "edge; use the knee threshold method instead");

  // Candidate epsilons: 0 followed by the distinct weights ascending.
  std::vector<double> candidates{0.0};
  for (auto it = ranked.rbegin(); it != ranked.rend(); ++it) {
    if (it->weight != candidates.back()) candidates.push_back(it->weight);
  }

  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  if (connected_above(ranked, n_nodes, candidates[hi])) {
    lo = hi;
  } else {
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (connected_above(ranked, n_nodes, candidates[mid])) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }

  Threshold t;
  t.epsilon = candidates[lo];
  t.method = ThresholdMethod::kConnected;
  return t;
}

Threshold connected_threshold(const WeightMatrix& weights) {
  return connected_threshold(rank_edges(weights), weights.size());
}

std::optional<std::size_t> knee_point(const LccCurve& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 3) return std::nullopt;
  const double x_span = static_cast<double>(pts.back().edges_removed - pts.front().edges_removed);
  const double y_top = static_cast<double>(pts.front().lcc_size);
  const double y_span = y_top - static_cast<double>(pts.back().lcc_size);
  if (x_span <= 0.0 || y_span <= 0.0) return std::nullopt;

  // A later point must beat the best by more than the tolerance, so near-ties
  // resolve to the fewest edges removed.
  std::optional<std::size_t> best;
  double best_diff = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double x = static_cast<double>(pts[k].edges_removed - pts.front().edges_removed) / x_span;
    const double y = 1.0 - (y_top - static_cast<double>(pts[k].lcc_size)) / y_span;
    // Chord from (0, 1) to (1, 0).
    const double diff = y - (1.0 - x);
    if (diff > best_diff + kKneeTolerance) {
      best_diff = diff;
      best = k;
    }
  }
  return best;
}

Threshold knee_threshold(const LccCurve& curve, const RankedEdges& ranked) {
  if (curve.points.size() < 3) throw std::invalid_argument("knee_threshold needs at least 3 curve points");
  if (curve.points.back().edges_removed != ranked.size())
    throw std::invalid_argument("curve and ranked edges disagree on the edge count");

  const auto knee = knee_point(curve);
  if (!knee) {
    Threshold t = connected_threshold(ranked, curve.n_nodes);
    t.fell_back = true;
    return t;
  }

  const std::size_t removed = curve.points[*knee].edges_removed;
  Threshold t;
  t.method = ThresholdMethod::kKnee;
  t.knee_index = *knee;
  t.epsilon = removed == 0 ? 0.0 : ranked[ranked.size() - removed].weight;
  t.dropped_nodes = outside_lcc(ranked, curve.n_nodes, t.epsilon);
  return t;
}

Threshold find_threshold(const WeightMatrix& weights, ThresholdMethod method) {
  const RankedEdges ranked = rank_edges(weights);
  if (method == ThresholdMethod::kConnected) return connected_threshold(ranked, weights.size());
  const LccCurve curve = lcc_curve(ranked, weights.size());
  if (curve.points.size() < 3) {
    Threshold t = connected_threshold(ranked, weights.size());
    t.fell_back = true;
    return t;
  }
  return knee_threshold(curve, ranked);
}

}  // namespace topocausal
