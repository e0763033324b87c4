#include "topocausal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "topocausal/errors.hpp"

namespace topocausal {

namespace {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Unbiased integer in [0, n) by rejection.
std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t range = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return static_cast<std::size_t>(x % range);
  }
}

// d distinct values from [0, n), ascending (Floyd's algorithm).
std::vector<std::size_t> sample_distinct(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<std::size_t> chosen;
  for (std::size_t j = n - d; j < n; ++j) {
    const std::size_t t = uniform_index(rng, j + 1);
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Seed streams for the generation stages.
constexpr std::uint64_t kDagStream = 0x6461670001ULL;
constexpr std::uint64_t kCptStream = 0x6370740002ULL;
constexpr std::uint64_t kSampleStream = 0x7377700003ULL;

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ b);
}

void validate(const GenSpec& spec) {
  if (spec.n_nodes < 2) throw std::invalid_argument("n_nodes must be >= 2");
  if (!(spec.mean_degree > 0.0)) throw std::invalid_argument("mean_degree must be > 0");
  if (spec.method != 1 && spec.method != 2) throw std::invalid_argument("method must be 1 or 2");
  if (spec.n_rows < 1) throw std::invalid_argument("n_rows must be >= 1");
  if (!(spec.concentration > 0.0)) throw std::invalid_argument("concentration must be > 0");
}

std::size_t Cpt::row_index(std::span<const State> parent_values) const {
  std::size_t index = 0;
  for (std::size_t p = 0; p < parents.size(); ++p) index = index * parent_states[p] + parent_values[p];
  return index;
}

void validate(const GroundTruth& gt) {
  const std::size_t n = gt.dag.n_nodes();
  if (!gt.dag.directed() || !is_acyclic(gt.dag)) throw DataError("ground truth graph is not a DAG");
  if (gt.states.size() != n || gt.cpts.size() != n) throw DataError("ground truth size mismatch");
  for (NodeId v = 0; v < n; ++v) {
    const Cpt& cpt = gt.cpts[v];
    const auto parents = gt.dag.in_neighbors(v);
    if (gt.states[v] < 2) throw DataError("node " + std::to_string(v) + " has fewer than 2 states");
    if (!std::equal(parents.begin(), parents.end(), cpt.parents.begin(), cpt.parents.end()))
      throw DataError("CPT parents of node " + std::to_string(v) + " do not match the DAG");
    std::size_t rows = 1;
    if (cpt.parent_states.size() != cpt.parents.size())
      throw DataError("CPT of node " + std::to_string(v) + " has inconsistent parent states");
    for (std::size_t p = 0; p < cpt.parents.size(); ++p) {
      if (cpt.parent_states[p] != gt.states[cpt.parents[p]])
        throw DataError("CPT of node " + std::to_string(v) + " has inconsistent parent states");
      rows *= cpt.parent_states[p];
    }
    if (cpt.rows.size() != rows)
      throw DataError("CPT of node " + std::to_string(v) + " has " + std::to_string(cpt.rows.size()) +
                      " rows, expected " + std::to_string(rows));
    for (const auto& row : cpt.rows) {
      if (row.size() != gt.states[v]) throw DataError("CPT row of node " + std::to_string(v) + " has wrong length");
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0 && p <= 1.0)) throw DataError("CPT entry outside [0, 1]");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) throw DataError("CPT row of node " + std::to_string(v) + " does not sum to 1");
    }
  }
}

double method1_rate(double mean_degree) {
  const double target = mean_degree / 2.0;
  if (target <= 1.0) return 0.0;
  // E[max(1, Poisson(rate))] = rate + exp(-rate), increasing in rate.
  double lo = 0.0;
  double hi = target;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid + std::exp(-mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Network gen_method1(const GenSpec& spec) {
  validate(spec);
  Rng rng(mix_seed(spec.seed, kDagStream + 1));
  const double rate = method1_rate(spec.mean_degree);
  std::poisson_distribution<long> poisson(rate > 0.0 ? rate : 1.0);

  Network dag(spec.n_nodes, GraphMode::kDirected);
  for (NodeId v = 1; v < spec.n_nodes; ++v) {
    std::size_t out = rate > 0.0 ? static_cast<std::size_t>(std::max(1L, poisson(rng))) : 1;
    out = std::min<std::size_t>(out, v);
    for (std::size_t target : sample_distinct(rng, v, out)) dag.add_edge(v, target);
  }
  return dag;
}

Network gen_method2(const GenSpec& spec) {
  validate(spec);
  Rng rng(mix_seed(spec.seed, kDagStream + 2));
  const double p = std::min(1.0, spec.mean_degree / static_cast<double>(spec.n_nodes - 1));
  Network dag(spec.n_nodes, GraphMode::kDirected);
  for (NodeId a = 0; a < spec.n_nodes; ++a) {
    for (NodeId b = a + 1; b < spec.n_nodes; ++b) {
      if (uniform01(rng) < p) dag.add_edge(a, b);
    }
  }
  return dag;
}

Network gen_dag(const GenSpec& spec) {
  validate(spec);
  return spec.method == 1 ? gen_method1(spec) : gen_method2(spec);
}

GroundTruth attach_cpts(const Network& dag, std::uint64_t seed, double concentration) {
  if (!dag.directed() || !is_acyclic(dag)) throw std::invalid_argument("attach_cpts needs a DAG");
  if (!(concentration > 0.0)) throw std::invalid_argument("concentration must be > 0");
  Rng rng(seed);
  GroundTruth gt;
  gt.dag = dag;
  gt.seed = seed;
  const std::size_t n = dag.n_nodes();
  gt.states.resize(n);
  for (NodeId v = 0; v < n; ++v) gt.states[v] = 2 + uniform_index(rng, 3);

  std::gamma_distribution<double> gamma(concentration, 1.0);
  gt.cpts.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    Cpt& cpt = gt.cpts[v];
    const auto parents = dag.in_neighbors(v);
    cpt.parents.assign(parents.begin(), parents.end());
    std::size_t rows = 1;
    for (NodeId p : cpt.parents) {
      cpt.parent_states.push_back(gt.states[p]);
      rows *= gt.states[p];
    }
    cpt.rows.resize(rows);
    for (auto& row : cpt.rows) {
      row.resize(gt.states[v]);
      double sum = 0.0;
      for (double& x : row) {
        x = gamma(rng);
        sum += x;
      }
      if (!(sum > 0.0)) {
        std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
        continue;
      }
      for (double& x : row) x /= sum;
    }
  }
  return gt;
}

Dataset sample(const GroundTruth& gt, std::size_t n_rows, std::uint64_t seed) {
  if (n_rows == 0) throw std::invalid_argument("n_rows must be >= 1");
  const std::size_t n = gt.n_nodes();
  const std::vector<NodeId> order = topological_order(gt.dag);
  Rng rng(seed);

  std::vector<std::vector<State>> columns(n, std::vector<State>(n_rows));
  std::vector<State> parent_values;
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (NodeId v : order) {
      const Cpt& cpt = gt.cpts[v];
      parent_values.clear();
      for (NodeId p : cpt.parents) parent_values.push_back(columns[p][r]);
      const auto& row = cpt.rows[cpt.row_index(parent_values)];
      const double u = uniform01(rng);
      double cumulative = 0.0;
      State s = static_cast<State>(row.size() - 1);
      for (std::size_t k = 0; k + 1 < row.size(); ++k) {
        cumulative += row[k];
        if (u < cumulative) {
          s = static_cast<State>(k);
          break;
        }
      }
      columns[v][r] = s;
    }
  }

  std::vector<Variable> variables(n);
  for (NodeId v = 0; v < n; ++v) {
    variables[v].name = "X" + std::to_string(v);
    variables[v].index = v;
    for (std::size_t s = 0; s < gt.states[v]; ++s) variables[v].alphabet.push_back(std::to_string(s));
  }
  return Dataset(std::move(variables), std::move(columns));
}

std::pair<GroundTruth, Dataset> generate(const GenSpec& spec) {
  validate(spec);
  GroundTruth gt = attach_cpts(gen_dag(spec), mix_seed(spec.seed, kCptStream), spec.concentration);
  gt.seed = spec.seed;
  Dataset ds = sample(gt, spec.n_rows, mix_seed(spec.seed, kSampleStream));
  return {std::move(gt), std::move(ds)};
}

}  // namespace topocausal
