#pragma once

#include <cstddef>
#include <optional>

#include "topocausal/graph.hpp"
#include "topocausal/inference.hpp"

namespace topocausal {

// Counts over candidate slots: n(n-1) ordered pairs (DAG) or n(n-1)/2
// unordered pairs (skeleton).
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  InferenceMode mode = InferenceMode::kDag;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// DAG mode compares ordered pairs, so a reversed edge is one fp and one fn.
// Skeleton mode compares unordered adjacencies of both networks. Throws
// std::invalid_argument when node counts differ.
ConfusionCounts confusion(const Network& truth, const Network& inferred, InferenceMode mode);

// fp / (fp + tn) and fn / (fn + tp); nullopt when the denominator is 0.
std::optional<double> fpr(const ConfusionCounts& c);
std::optional<double> fnr(const ConfusionCounts& c);

// Matthews correlation coefficient; nullopt when any denominator factor is 0.
std::optional<double> mcc(const ConfusionCounts& c);

// How the two constraint stages treated spurious (absent in truth) and true
// edges, counted over DAG-mode ordered pairs.
struct SpuriousStats {
  std::size_t candidates = 0;        // ordered pairs absent from the truth
  std::size_t zeroth_spurious = 0;   // spurious edges kept by the zeroth step
  std::size_t zeroth_edges = 0;
  std::size_t final_spurious = 0;    // spurious edges surviving the first step
  std::size_t wrongly_removed = 0;   // true edges removed by the first step

  // Share of candidate spurious edges the zeroth step did not add.
  double zeroth_removal() const;
  // Share of zeroth-step spurious edges removed by the first step
  // (nullopt when the zeroth step kept none).
  std::optional<double> first_removal() const;
};

// Requires a DAG-mode result.
SpuriousStats spurious_stats(const Network& truth, const InferenceResult& result);

}  // namespace topocausal
