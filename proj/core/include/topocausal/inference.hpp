#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "topocausal/dataset.hpp"
#include "topocausal/graph.hpp"
#include "topocausal/measures.hpp"
#include "topocausal/threshold.hpp"

namespace topocausal {

enum class InferenceMode { kSkeleton, kDag };

std::string_view to_string(InferenceMode m);
// Accepts "skeleton" / "dag".
InferenceMode parse_mode(std::string_view text);

inline GraphMode graph_mode(InferenceMode m) {
  return m == InferenceMode::kDag ? GraphMode::kDirected : GraphMode::kUndirected;
}

struct InferenceConfig {
  Measure measure = Measure::kNetInfluence;
  ThresholdMethod threshold = ThresholdMethod::kKnee;
  InferenceMode mode = InferenceMode::kDag;
  int max_order = 1;     // 0 or 1
  unsigned workers = 0;  // 0 = default_workers()
};

// Throws std::invalid_argument for max_order outside {0, 1}.
void validate(const InferenceConfig& cfg);

// An edge dropped by the first-order constraint, the conditioning variable that
// separated it and the maximum conditional weight observed for that variable.
struct FirstOrderRemoval {
  Edge edge;
  NodeId given = 0;
  double weight = 0.0;
};

struct StageStats {
  std::size_t zeroth_edges = 0;
  std::size_t final_edges = 0;
  std::size_t first_order_removed = 0;
  std::size_t conditional_tests = 0;
  double t_weights_s = 0.0;
  double t_threshold_s = 0.0;
  double t_constrain_s = 0.0;
  double t_total_s = 0.0;
};

struct InferenceResult {
  Network network;
  Network zeroth;
  Threshold threshold;
  std::vector<FirstOrderRemoval> removed_first_order;
  StageStats stats;
  bool acyclic = true;         // DAG mode only
  std::size_t two_cycles = 0;  // DAG mode only
};

// Keeps every direction (DAG) or pair (skeleton) whose weight exceeds epsilon.
// Nodes dropped by the knee method get no edges.
Network zeroth_constraint(const WeightMatrix& weights, const Threshold& eps, InferenceMode mode);

// Removes edges that some single conditioning variable drives to a conditional
// weight <= epsilon. DAG mode conditions J -> I on the other parents of I;
// skeleton mode conditions a - b on their common neighbours. Removals apply
// immediately. `tests`, when given, receives the number of conditional
// measures evaluated.
std::vector<FirstOrderRemoval> first_constraint(Network& net, const Dataset& ds,
                                                const WeightMatrix& weights, const Threshold& eps,
                                                std::size_t* tests = nullptr);

// weight_matrix -> threshold -> zeroth constraint -> first constraint.
InferenceResult infer(const Dataset& ds, const InferenceConfig& cfg);

// Stages after the weight matrix, for callers that reuse one matrix.
InferenceResult infer_from_weights(const Dataset& ds, const WeightMatrix& weights,
                                   const InferenceConfig& cfg);

}  // namespace topocausal
