#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "topocausal/eval.hpp"
#include "topocausal/inference.hpp"
#include "topocausal/measures.hpp"
#include "topocausal/synth.hpp"
#include "topocausal/threshold.hpp"

namespace topocausal {

// TSV with header `src dst weight [arg_j arg_i]`, one line per ordered pair
// sorted by (src, dst). The argmax columns carry state labels and are only
// written for NI matrices.
void write_weight_matrix(const WeightMatrix& weights, const Dataset& ds, std::ostream& out);

// Two-column CSV `edges_removed,lcc_size`.
void write_curve_csv(const LccCurve& curve, std::ostream& out);

// JSON object with epsilon, method, fallback flag, knee point and dropped nodes.
std::string threshold_json(const Threshold& t, std::span<const std::string> names);

// JSON report of an inference run: threshold, stage statistics and timings,
// first-order removals, acyclicity.
std::string inference_report_json(const InferenceResult& result, const InferenceConfig& cfg,
                                  std::span<const std::string> names);

// Confusion counts and rates; undefined rates are written as null.
std::string eval_report_json(const ConfusionCounts& c);

// Ground truth as JSON: seed, nodes (name, states, parents, CPT rows) and edges.
std::string ground_truth_json(const GroundTruth& gt, std::span<const std::string> names);
// Parses ground_truth_json output; validates the result. Throws DataError.
// Node names are written to `names` when given.
GroundTruth parse_ground_truth(std::istream& in, std::vector<std::string>* names = nullptr);

}  // namespace topocausal
