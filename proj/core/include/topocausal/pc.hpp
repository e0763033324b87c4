#pragma once

#include <cstddef>
#include <vector>

#include "topocausal/dataset.hpp"
#include "topocausal/graph.hpp"
#include "topocausal/inference.hpp"

namespace topocausal {

struct PcOptions {
  double alpha = 0.05;
  // Largest conditioning set size tried; -1 means no limit.
  int max_condition_size = -1;
};

// Partially directed result: `cpdag` holds a -> b as (a, b) and every
// undirected edge as both (a, b) and (b, a).
struct PcResult {
  Network skeleton;
  Network cpdag;
  std::size_t ci_tests = 0;
};

// Fisher-z partial-correlation test on state codes; true when independence is
// not rejected at level alpha. `given` must not contain a or b.
bool fisher_z_independent(const Dataset& ds, std::size_t a, std::size_t b,
                          const std::vector<std::size_t>& given, double alpha);

// PC-stable: order-independent skeleton search with growing conditioning sets,
// v-structures from separating sets, then Meek rules R1-R3.
PcResult pc_stable(const Dataset& ds, const PcOptions& options = {});

// DAG mode reports undirected CPDAG edges in both directions; skeleton mode
// returns the undirected skeleton.
Network pc_baseline(const Dataset& ds, const PcOptions& options, InferenceMode mode);

}  // namespace topocausal
