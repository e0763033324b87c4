#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "topocausal/eval.hpp"
#include "topocausal/inference.hpp"
#include "topocausal/pc.hpp"
#include "topocausal/synth.hpp"

namespace topocausal {

// One algorithm configuration in a sweep: either the topological-threshold
// pipeline or the PC-stable baseline.
struct AlgorithmConfig {
  enum class Kind { kTopological, kPc };

  Kind kind = Kind::kTopological;
  InferenceConfig inference;
  PcOptions pc;

  static AlgorithmConfig topological(Measure m, ThresholdMethod t, InferenceMode mode);
  static AlgorithmConfig baseline(InferenceMode mode, double alpha = 0.05);

  InferenceMode mode() const { return inference.mode; }
  std::string measure_label() const;    // ni | fisher | pc
  std::string threshold_label() const;  // connected | knee | alpha
  std::string label() const;            // e.g. ni-knee-dag, pc-dag
};

// Parses labels such as "ni-knee-dag" or "pc-skeleton". Throws std::invalid_argument.
AlgorithmConfig parse_algorithm(const std::string& label);

// NI/Fisher x Connected/Knee x DAG/skeleton plus PC in both modes.
std::vector<AlgorithmConfig> all_algorithms();

struct BenchRun {
  GenSpec spec;
  AlgorithmConfig config;
  std::size_t rep = 0;
  ConfusionCounts counts;
  std::optional<double> fpr;
  std::optional<double> fnr;
  std::optional<double> mcc;
  StageStats stats;  // PC fills t_total_s only
  std::optional<SpuriousStats> spurious;  // topological DAG runs
  std::string error;  // empty on success
};

// Seed of repetition `rep` of a spec: a hash of the base seed and the spec's
// content, so adding cells to a sweep leaves existing cells unchanged.
std::uint64_t run_seed(std::uint64_t base_seed, const GenSpec& spec, std::size_t rep);

// For every (spec, rep) generates one instance and runs every config on it.
// Runs are ordered by (spec, rep, config) whatever the worker count; a failing
// run is recorded in its `error` field. Stage times are wall-clock.
std::vector<BenchRun> bench(const std::vector<GenSpec>& sweep,
                            const std::vector<AlgorithmConfig>& configs, std::size_t reps,
                            std::uint64_t base_seed, unsigned workers = 0);

struct Summary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

// Aggregate of one (spec, config) cell over its successful repetitions.
struct BenchCell {
  GenSpec spec;
  AlgorithmConfig config;
  std::size_t runs = 0;
  std::size_t failures = 0;
  Summary fpr, fnr, mcc, t_weights_s, t_threshold_s, t_constrain_s, t_total_s;
  // Mean total time over the mean total time of the PC cell of the same spec
  // and mode, when such a cell exists.
  std::optional<double> time_over_pc;
};

std::vector<BenchCell> aggregate(const std::vector<BenchRun>& runs);

// Per-run CSV (one row per run) and the aggregated JSON summary.
void write_bench_csv(const std::vector<BenchRun>& runs, std::ostream& out);
void write_bench_summary(const std::vector<BenchCell>& cells, std::ostream& out);

}  // namespace topocausal
