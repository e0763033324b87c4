#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "topocausal/dataset.hpp"
#include "topocausal/graph.hpp"

namespace topocausal {

// Parameters for one synthetic benchmark instance.
struct GenSpec {
  std::size_t n_nodes = 60;
  double mean_degree = 3.0;
  int method = 2;  // 1: grown from a single sink, 2: random triangular adjacency
  std::size_t n_rows = 10000;
  std::uint64_t seed = 1;
  // Flat Dirichlet concentration of every CPT row; lower means stronger edges.
  double concentration = 1.0;
};

// Throws std::invalid_argument when an invariant of GenSpec is violated.
void validate(const GenSpec& spec);

// Conditional probability table of one node. Rows are indexed by the parent
// configuration in mixed radix, first parent most significant.
struct Cpt {
  std::vector<NodeId> parents;          // ascending
  std::vector<std::size_t> parent_states;
  std::vector<std::vector<double>> rows;

  // parent_values[p] is the state of parents[p].
  std::size_t row_index(std::span<const State> parent_values) const;
};

struct GroundTruth {
  Network dag;
  std::vector<std::size_t> states;
  std::vector<Cpt> cpts;
  std::uint64_t seed = 0;

  std::size_t n_nodes() const { return dag.n_nodes(); }
};

// Checks acyclicity, table shapes and row normalization (1e-12); throws DataError.
void validate(const GroundTruth& gt);

// Poisson rate used by method 1 so that max(1, Poisson(rate)) has mean
// mean_degree / 2 (0 when mean_degree <= 2, i.e. a tree).
double method1_rate(double mean_degree);

// Grows a DAG from node 0 (the single sink): every new node gets out-degree
// max(1, Poisson(rate)), capped by the number of existing nodes, with targets
// drawn uniformly among them.
Network gen_method1(const GenSpec& spec);

// Edge a -> b for each a < b independently with p = mean_degree / (n - 1).
Network gen_method2(const GenSpec& spec);

Network gen_dag(const GenSpec& spec);

// Uniform state counts in {2, 3, 4} and flat Dirichlet CPT rows.
GroundTruth attach_cpts(const Network& dag, std::uint64_t seed, double concentration = 1.0);

// Ancestral sampling in topological order; variables are named X0..Xn-1 with
// state labels "0".."k-1".
Dataset sample(const GroundTruth& gt, std::size_t n_rows, std::uint64_t seed);

// Seed derivation used by the generators and the benchmark harness.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// gen_dag + attach_cpts + sample with seeds derived from spec.seed.
std::pair<GroundTruth, Dataset> generate(const GenSpec& spec);

}  // namespace topocausal
