#pragma once

// Test-only helpers and independent oracles. Nothing here calls the library
// code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "topocausal/dataset.hpp"
#include "topocausal/graph.hpp"
#include "topocausal/synth.hpp"

namespace topocausal::testing {

inline Dataset make_dataset(const std::vector<std::vector<State>>& columns,
                            const std::vector<std::size_t>& states) {
  std::vector<Variable> vars;
  for (std::size_t v = 0; v < columns.size(); ++v) {
    Variable var;
    var.name = "V" + std::to_string(v);
    var.index = v;
    for (std::size_t s = 0; s < states[v]; ++s) var.alphabet.push_back("s" + std::to_string(s));
    vars.push_back(var);
  }
  return Dataset(vars, columns);
}

// Random dataset where every column uses all of its states at least once.
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n_vars, std::size_t n_rows,
                              std::size_t max_states = 4) {
  std::vector<std::vector<State>> cols(n_vars);
  std::vector<std::size_t> states(n_vars);
  for (std::size_t v = 0; v < n_vars; ++v) {
    states[v] = std::uniform_int_distribution<std::size_t>(2, max_states)(rng);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(states[v]) - 1);
    for (std::size_t r = 0; r < n_rows; ++r) {
      cols[v].push_back(static_cast<State>(r < states[v] ? r : pick(rng)));
    }
    std::shuffle(cols[v].begin(), cols[v].end(), rng);
  }
  return make_dataset(cols, states);
}

// Connected-component sizes by breadth-first labeling over an undirected edge list.
inline std::size_t flood_fill_lcc(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> label(n, -1);
  std::size_t best = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    std::size_t size = 0;
    std::queue<std::size_t> q;
    q.push(s);
    label[s] = static_cast<int>(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      ++size;
      for (std::size_t w : adj[v]) {
        if (label[w] < 0) {
          label[w] = static_cast<int>(s);
          q.push(w);
        }
      }
    }
    best = std::max(best, size);
  }
  return best;
}

// Symmetric pair weights w[a][b]; 0 means no edge.
using PairWeights = std::vector<std::vector<double>>;

inline PairWeights random_pair_weights(std::mt19937_64& rng, std::size_t n, double density,
                                       int distinct_levels = 0) {
  PairWeights w(n, std::vector<double>(n, 0.0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (u(rng) >= density) continue;
      double x = 0.01 + u(rng);
      if (distinct_levels > 0) x = 0.01 + std::floor(u(rng) * distinct_levels) / distinct_levels;
      w[a][b] = w[b][a] = x;
    }
  }
  return w;
}

inline std::vector<std::pair<std::size_t, std::size_t>> edges_above(const PairWeights& w, double eps) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < w.size(); ++a) {
    for (std::size_t b = a + 1; b < w.size(); ++b) {
      if (w[a][b] > 0.0 && w[a][b] > eps) out.emplace_back(a, b);
    }
  }
  return out;
}

// max{eps in {0} U weights : graph of weights > eps spans all nodes}, by
// trying every candidate. nullopt-like -1 when even eps = 0 is disconnected.
inline double exhaustive_connected_eps(const PairWeights& w) {
  std::vector<double> candidates{0.0};
  for (std::size_t a = 0; a < w.size(); ++a) {
    for (std::size_t b = a + 1; b < w.size(); ++b) {
      if (w[a][b] > 0.0) candidates.push_back(w[a][b]);
    }
  }
  double best = -1.0;
  for (double eps : candidates) {
    if (flood_fill_lcc(w.size(), edges_above(w, eps)) == w.size()) best = std::max(best, eps);
  }
  return best;
}

// Index of the maximum of (y_norm - (1 - x_norm)) over the points, first index
// on ties within 1e-12; -1 if the maximum is not positive.
inline long brute_force_knee(const std::vector<std::pair<double, double>>& pts) {
  const double x0 = pts.front().first, x1 = pts.back().first;
  const double y0 = pts.back().second, y1 = pts.front().second;
  if (x1 == x0 || y1 == y0) return -1;
  long best = -1;
  double best_d = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double x = (pts[k].first - x0) / (x1 - x0);
    const double y = (pts[k].second - y0) / (y1 - y0);
    const double d = y - (1.0 - x);
    if (d > best_d + 1e-12) {
      best_d = d;
      best = static_cast<long>(k);
    }
  }
  return best;
}

// Exact joint distribution of a ground truth by enumerating all state
// combinations; index is mixed radix with node 0 most significant.
inline std::vector<double> exact_joint(const GroundTruth& gt) {
  const std::size_t n = gt.n_nodes();
  std::size_t total = 1;
  for (std::size_t s : gt.states) total *= s;
  std::vector<double> joint(total, 0.0);
  std::vector<State> x(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t v = n; v-- > 0;) {
      x[v] = static_cast<State>(rest % gt.states[v]);
      rest /= gt.states[v];
    }
    double p = 1.0;
    for (std::size_t v = 0; v < n; ++v) {
      const Cpt& cpt = gt.cpts[v];
      std::size_t row = 0;
      for (std::size_t k = 0; k < cpt.parents.size(); ++k) row = row * gt.states[cpt.parents[k]] + x[cpt.parents[k]];
      p *= cpt.rows[row][x[v]];
    }
    joint[idx] = p;
  }
  return joint;
}

inline std::vector<double> empirical_joint(const Dataset& ds, const std::vector<std::size_t>& states) {
  std::size_t total = 1;
  for (std::size_t s : states) total *= s;
  std::vector<double> joint(total, 0.0);
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    std::size_t idx = 0;
    for (std::size_t v = 0; v < ds.n_vars(); ++v) idx = idx * states[v] + ds.at(r, v);
    joint[idx] += 1.0;
  }
  for (double& p : joint) p /= static_cast<double>(ds.n_rows());
  return joint;
}

// Probability mass of the states x (over all variables) with pred(x) true.
template <typename Pred>
double joint_mass(const std::vector<double>& joint, const std::vector<std::size_t>& states, Pred pred) {
  const std::size_t n = states.size();
  std::vector<State> x(n, 0);
  double mass = 0.0;
  for (std::size_t idx = 0; idx < joint.size(); ++idx) {
    std::size_t rest = idx;
    for (std::size_t v = n; v-- > 0;) {
      x[v] = static_cast<State>(rest % states[v]);
      rest /= states[v];
    }
    if (pred(x)) mass += joint[idx];
  }
  return mass;
}

// NI W(i|j) = P(i|j) - P(i|not j) computed from a joint table.
inline double joint_ni(const std::vector<double>& joint, const std::vector<std::size_t>& states,
                       std::size_t tv, State ts, std::size_t sv, State ss) {
  auto mass = [&](auto pred) { return joint_mass(joint, states, pred); };
  const double pj = mass([&](const std::vector<State>& x) { return x[sv] == ss; });
  const double pij = mass([&](const std::vector<State>& x) { return x[sv] == ss && x[tv] == ts; });
  const double pi_nj = mass([&](const std::vector<State>& x) { return x[sv] != ss && x[tv] == ts; });
  return pij / pj - pi_nj / (1.0 - pj);
}

inline double mcc_formula(double tp, double fp, double fn, double tn) {
  return (tp * tn - fp * fn) / std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
}

}  // namespace topocausal::testing
