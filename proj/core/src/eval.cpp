#include "topocausal/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace topocausal {

ConfusionCounts confusion(const Network& truth, const Network& inferred, InferenceMode mode) {
  if (truth.n_nodes() != inferred.n_nodes()) throw std::invalid_argument("node counts differ");
  if (mode == InferenceMode::kDag && (!truth.directed() || !inferred.directed()))
    throw std::invalid_argument("DAG-mode scoring needs directed networks");

  ConfusionCounts c;
  c.mode = mode;
  const std::size_t n = truth.n_nodes();
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      if (a == b || (mode == InferenceMode::kSkeleton && b < a)) continue;
      const bool actual = mode == InferenceMode::kDag ? truth.has_edge(a, b) : truth.adjacent(a, b);
      const bool predicted = mode == InferenceMode::kDag ? inferred.has_edge(a, b) : inferred.adjacent(a, b);
      if (actual && predicted) {
        ++c.tp;
      } else if (predicted) {
        ++c.fp;
      } else if (actual) {
        ++c.fn;
      } else {
        ++c.tn;
      }
    }
  }
  return c;
}

std::optional<double> fpr(const ConfusionCounts& c) {
  if (c.fp + c.tn == 0) return std::nullopt;
  return static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
}

std::optional<double> fnr(const ConfusionCounts& c) {
  if (c.fn + c.tp == 0) return std::nullopt;
  return static_cast<double>(c.fn) / static_cast<double>(c.fn + c.tp);
}

std::optional<double> mcc(const ConfusionCounts& c) {
  const double tp = static_cast<double>(c.tp);
  const double fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn);
  const double tn = static_cast<double>(c.tn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) return std::nullopt;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

double SpuriousStats::zeroth_removal() const {
  if (candidates == 0) return 1.0;
  return 1.0 - static_cast<double>(zeroth_spurious) / static_cast<double>(candidates);
}

std::optional<double> SpuriousStats::first_removal() const {
  if (zeroth_spurious == 0) return std::nullopt;
  return static_cast<double>(zeroth_spurious - final_spurious) / static_cast<double>(zeroth_spurious);
}

SpuriousStats spurious_stats(const Network& truth, const InferenceResult& result) {
  if (!truth.directed() || !result.network.directed() || !result.zeroth.directed())
    throw std::invalid_argument("spurious_stats needs DAG-mode networks");
  if (truth.n_nodes() != result.network.n_nodes()) throw std::invalid_argument("node counts differ");

  SpuriousStats s;
  const std::size_t n = truth.n_nodes();
  s.candidates = n * (n - 1) - truth.edge_count();
  s.zeroth_edges = result.zeroth.edge_count();
  for (const Edge& e : result.zeroth.edges()) s.zeroth_spurious += !truth.has_edge(e.from, e.to);
  for (const Edge& e : result.network.edges()) s.final_spurious += !truth.has_edge(e.from, e.to);
  for (const auto& r : result.removed_first_order) s.wrongly_removed += truth.has_edge(r.edge.from, r.edge.to);
  return s;
}

}  // namespace topocausal
