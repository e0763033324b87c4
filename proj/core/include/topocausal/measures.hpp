#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "topocausal/dataset.hpp"
#include "topocausal/graph.hpp"

namespace topocausal {

enum class Measure { kNetInfluence, kFisher };

std::string_view to_string(Measure m);
// Accepts "ni" / "fisher". Throws std::invalid_argument otherwise.
Measure parse_measure(std::string_view text);

// A measure value; `defined` is false when a conditional it needs has no support.
struct InfluenceValue {
  double value = 0.0;
  bool defined = false;

  // Undefined values count as no evidence of influence.
  double or_zero() const { return defined ? value : 0.0; }
};

// A (variable, state) pair used for the target i and source j of Net Influence.
struct StateRef {
  std::size_t var = 0;
  State state = 0;
};

// Net Influence W(i | j; u) = P(i | j, u) - P(i | not j, u).
// Throws std::invalid_argument when i, j and u mention a variable twice.
InfluenceValue net_influence(const Dataset& ds, StateRef target, StateRef source,
                             const Assignment& context = {}, const RowIndex* index = nullptr);

// Influence distance d_{i|u}(j, j') = P(i | j, u) - P(i | j', u); j and j'
// are two states of the same source variable.
InfluenceValue influence_distance(const Dataset& ds, StateRef target, StateRef source,
                                  State source_alt, const Assignment& context = {},
                                  const RowIndex* index = nullptr);

// Omega for source -> target. For NI, argmax holds the (source state, target
// state) pair achieving the maximum; it is unset for Fisher weights.
struct EdgeWeight {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 0.0;
  std::optional<std::pair<State, State>> argmax;
};

// max over (j, i) of |W(i | j)|; undefined state pairs are skipped and a pair
// with no defined state pair weighs 0. Throws std::invalid_argument if equal.
EdgeWeight edge_weight_ni(const Dataset& ds, std::size_t source, std::size_t target);

// max over (i, j, k) of |W(i | j; k)| for a single conditioning variable k.
// Undefined triples contribute 0.
double conditional_weight_ni(const Dataset& ds, std::size_t source, std::size_t target,
                             std::size_t given);

// Pearson correlation of integer state codes; nullopt for a zero-variance column.
std::optional<double> pearson(const Dataset& ds, std::size_t a, std::size_t b);

// |Fisher z| statistic: sqrt(n - |u| - 3) * |atanh(r)| with r the Pearson
// (or first-order partial, given `given`) correlation of state codes, clamped
// to +-(1 - 1e-12). Undefined for zero-variance columns or a degenerate
// conditioning column. Throws std::invalid_argument when variables repeat or
// n_rows <= 3 + |u|.
InfluenceValue fisher_weight(const Dataset& ds, std::size_t a, std::size_t b,
                             std::optional<std::size_t> given = std::nullopt);

// Dense n x n table of edge weights, (source, target) indexed. The diagonal is
// unused (weight 0).
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t n, Measure measure);

  std::size_t size() const { return n_; }
  Measure measure() const { return measure_; }

  const EdgeWeight& at(std::size_t source, std::size_t target) const {
    return entries_[source * n_ + target];
  }
  EdgeWeight& at(std::size_t source, std::size_t target) { return entries_[source * n_ + target]; }
  double weight(std::size_t source, std::size_t target) const { return at(source, target).weight; }
  // Orientation-free weight: max of both directions.
  double pair_weight(std::size_t a, std::size_t b) const;

  friend bool operator==(const WeightMatrix&, const WeightMatrix&);

 private:
  std::size_t n_ = 0;
  Measure measure_ = Measure::kNetInfluence;
  std::vector<EdgeWeight> entries_;
};

// All pairwise weights. NI fills both directions from one contingency table per
// unordered pair; Fisher mirrors the symmetric statistic. The result does not
// depend on `workers` (0 = default worker count).
WeightMatrix weight_matrix(const Dataset& ds, Measure measure, unsigned workers = 0);

}  // namespace topocausal
