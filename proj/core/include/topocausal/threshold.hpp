#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "topocausal/graph.hpp"
#include "topocausal/measures.hpp"

namespace topocausal {

// Unordered node pair (a < b) with its orientation-free weight.
struct RankedEdge {
  NodeId a = 0;
  NodeId b = 0;
  double weight = 0.0;

  friend bool operator==(const RankedEdge&, const RankedEdge&) = default;
};

// Positive-weight pairs sorted by weight descending, ties by (a, b) ascending.
using RankedEdges = std::vector<RankedEdge>;

RankedEdges rank_edges(const WeightMatrix& weights);

struct CurvePoint {
  std::size_t edges_removed = 0;
  std::size_t lcc_size = 0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

// LCC size while the ranked edges are removed weakest first. Point k has k
// edges removed; the last point has every edge removed (LCC 1).
struct LccCurve {
  std::vector<CurvePoint> points;
  std::size_t n_nodes = 0;
};

LccCurve lcc_curve(const RankedEdges& ranked, std::size_t n_nodes);
LccCurve lcc_curve(const WeightMatrix& weights);

enum class ThresholdMethod { kConnected, kKnee };

std::string_view to_string(ThresholdMethod m);
// Accepts "connected" / "knee".
ThresholdMethod parse_threshold_method(std::string_view text);

struct Threshold {
  double epsilon = 0.0;
  ThresholdMethod method = ThresholdMethod::kConnected;
  // Knee only: nodes outside the LCC of the kept graph.
  std::vector<NodeId> dropped_nodes;
  // Set when the knee search found no knee and used the connected method.
  bool fell_back = false;
  // Knee only: index of the selected curve point.
  std::optional<std::size_t> knee_index;
};

// Largest epsilon such that the pairs with weight > epsilon connect all nodes.
// Candidates are 0 and every distinct pair weight; the search is a binary
// search over them. Throws AlgorithmError if the positive-weight graph is
// itself disconnected.
Threshold connected_threshold(const RankedEdges& ranked, std::size_t n_nodes);
Threshold connected_threshold(const WeightMatrix& weights);

// Curve point of maximum difference between the normalized curve and the chord
// joining its endpoints (ties: fewest edges removed). nullopt when the maximum
// difference is not positive.
std::optional<std::size_t> knee_point(const LccCurve& curve);

// Epsilon = weight of the last edge removed at the knee point. Falls back to
// connected_threshold() when there is no knee. Throws std::invalid_argument
// for curves with fewer than 3 points.
Threshold knee_threshold(const LccCurve& curve, const RankedEdges& ranked);

Threshold find_threshold(const WeightMatrix& weights, ThresholdMethod method);

}  // namespace topocausal
