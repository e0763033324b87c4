#include "topocausal/pc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

#include "topocausal/measures.hpp"

namespace topocausal {

namespace {

constexpr double kClamp = 1.0 - 1e-12;

// Correlation matrix of state codes; zero-variance columns correlate 0 with
// everything, so they separate at order 0.
class Correlations {
 public:
  explicit Correlations(const Dataset& ds) : n_(ds.n_vars()), r_(n_ * n_, 0.0) {
    for (std::size_t a = 0; a < n_; ++a) {
      r_[a * n_ + a] = 1.0;
      for (std::size_t b = a + 1; b < n_; ++b) {
        const double r = pearson(ds, a, b).value_or(0.0);
        r_[a * n_ + b] = r;
        r_[b * n_ + a] = r;
      }
    }
  }
  double operator()(std::size_t a, std::size_t b) const { return r_[a * n_ + b]; }

 private:
  std::size_t n_;
  std::vector<double> r_;
};

// Partial correlation of vars[0], vars[1] given vars[2..].
double partial_correlation(const Correlations& corr, const std::vector<std::size_t>& vars) {
  const auto k = static_cast<Eigen::Index>(vars.size());
  if (k == 2) return corr(vars[0], vars[1]);
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = corr(vars[i], vars[j]);
  }
  Eigen::MatrixXd precision;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) {
    precision = llt.solve(Eigen::MatrixXd::Identity(k, k));
  } else {
    precision = m.completeOrthogonalDecomposition().pseudoInverse();
  }
  const double denom = std::sqrt(precision(0, 0) * precision(1, 1));
  if (!(denom > 0.0)) return 0.0;
  return std::clamp(-precision(0, 1) / denom, -1.0, 1.0);
}

// Variables are laid out in name order so that the computation, and hence the
// decision, does not depend on column positions.
bool independent(const Dataset& ds, const Correlations& corr, std::size_t a, std::size_t b,
                 const std::vector<std::size_t>& given, double alpha) {
  const std::size_t n = ds.n_rows();
  if (n <= given.size() + 3) return false;
  auto by_name = [&](std::size_t x, std::size_t y) { return ds.variable(x).name < ds.variable(y).name; };
  std::vector<std::size_t> vars{std::min(a, b, by_name), std::max(a, b, by_name)};
  std::vector<std::size_t> rest = given;
  std::sort(rest.begin(), rest.end(), by_name);
  vars.insert(vars.end(), rest.begin(), rest.end());

  const double r = std::clamp(partial_correlation(corr, vars), -kClamp, kClamp);
  const double z = std::sqrt(static_cast<double>(n - given.size() - 3)) *
                   std::abs(0.5 * std::log((1.0 + r) / (1.0 - r)));
  const double p_value = std::erfc(z / std::sqrt(2.0));
  return p_value >= alpha;
}

// Calls visit(subset) for every size-k subset of items in lexicographic order
// until visit returns true.
template <typename Visit>
bool for_each_subset(const std::vector<std::size_t>& items, std::size_t k, Visit visit) {
  if (k > items.size()) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<std::size_t> subset(k);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = items[idx[i]];
    if (visit(subset)) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == items.size() - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

class Marks {
 public:
  explicit Marks(std::size_t n) : n_(n), mark_(n * n, 0), locked_(n * n, 0) {}

  void lock(std::size_t a, std::size_t b) { locked_[key(a, b)] = 1; }
  char& operator()(std::size_t a, std::size_t b) { return mark_[a * n_ + b]; }
  char operator()(std::size_t a, std::size_t b) const { return mark_[a * n_ + b]; }

  bool adjacent(std::size_t a, std::size_t b) const { return (*this)(a, b) || (*this)(b, a); }
  bool directed(std::size_t a, std::size_t b) const { return (*this)(a, b) && !(*this)(b, a); }
  bool undirected(std::size_t a, std::size_t b) const {
    return (*this)(a, b) && (*this)(b, a) && !locked_[key(a, b)];
  }
  void orient(std::size_t a, std::size_t b) { (*this)(b, a) = 0; }
  std::size_t size() const { return n_; }

 private:
  std::size_t key(std::size_t a, std::size_t b) const { return std::min(a, b) * n_ + std::max(a, b); }

  std::size_t n_;
  std::vector<char> mark_;
  std::vector<char> locked_;
};

bool apply_meek(Marks& g) {
  const std::size_t n = g.size();
  bool changed = false;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !g.undirected(a, b)) continue;
      bool orient = false;
      for (std::size_t c = 0; c < n && !orient; ++c) {
        if (c == a || c == b) continue;
        // R1: c -> a - b, c and b not adjacent.
        if (g.directed(c, a) && !g.adjacent(c, b)) orient = true;
        // R2: a -> c -> b.
        if (g.directed(a, c) && g.directed(c, b)) orient = true;
      }
      // R3: a - c -> b, a - d -> b, c and d not adjacent.
      for (std::size_t c = 0; c < n && !orient; ++c) {
        if (c == a || c == b || !g.undirected(a, c) || !g.directed(c, b)) continue;
        for (std::size_t d = c + 1; d < n && !orient; ++d) {
          if (d == a || d == b || !g.undirected(a, d) || !g.directed(d, b)) continue;
          if (!g.adjacent(c, d)) orient = true;
        }
      }
      if (orient) {
        g.orient(a, b);
        changed = true;
      }
    }
  }
  return changed;
}

}  // namespace

bool fisher_z_independent(const Dataset& ds, std::size_t a, std::size_t b,
                          const std::vector<std::size_t>& given, double alpha) {
  if (a == b || std::find(given.begin(), given.end(), a) != given.end() ||
      std::find(given.begin(), given.end(), b) != given.end())
    throw std::invalid_argument("conditioning set must not contain the tested pair");
  return independent(ds, Correlations(ds), a, b, given, alpha);
}

PcResult pc_stable(const Dataset& ds, const PcOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
  const std::size_t n = ds.n_vars();
  const Correlations corr(ds);

  PcResult result;
  Network skel(n, GraphMode::kUndirected);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) skel.add_edge(a, b);
  }
  std::map<std::pair<NodeId, NodeId>, std::vector<NodeId>> sepset;

  for (std::size_t level = 0;; ++level) {
    if (options.max_condition_size >= 0 && level > static_cast<std::size_t>(options.max_condition_size)) break;
    // Adjacency snapshot for the whole level: this is what makes PC stable.
    std::vector<std::vector<NodeId>> snapshot(n);
    for (NodeId v = 0; v < n; ++v) {
      const auto nb = skel.neighbors(v);
      snapshot[v].assign(nb.begin(), nb.end());
    }
    bool testable = false;
    for (NodeId x = 0; x < n; ++x) {
      for (NodeId y : snapshot[x]) {
        if (!skel.has_edge(x, y)) continue;
        std::vector<NodeId> candidates;
        for (NodeId v : snapshot[x]) {
          if (v != y) candidates.push_back(v);
        }
        if (candidates.size() < level) continue;
        testable = true;
        for_each_subset(candidates, level, [&](const std::vector<NodeId>& s) {
          ++result.ci_tests;
          if (!independent(ds, corr, x, y, s, options.alpha)) return false;
          skel.remove_edge(x, y);
          sepset[{std::min(x, y), std::max(x, y)}] = s;
          return true;
        });
      }
    }
    if (!testable) break;
  }

  Marks marks(n);
  for (const Edge& e : skel.edges()) {
    marks(e.from, e.to) = 1;
    marks(e.to, e.from) = 1;
  }

  // Unshielded colliders x -> z <- y with z outside sepset(x, y).
  for (NodeId z = 0; z < n; ++z) {
    const auto nb = skel.neighbors(z);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const NodeId x = nb[i];
        const NodeId y = nb[j];
        if (skel.has_edge(x, y)) continue;
        const auto it = sepset.find({x, y});
        if (it != sepset.end() && std::find(it->second.begin(), it->second.end(), z) != it->second.end())
          continue;
        for (NodeId p : {x, y}) {
          if (marks.undirected(p, z)) {
            marks.orient(p, z);
          } else if (marks.directed(z, p)) {
            // Conflicting colliders: keep the edge bidirected and out of Meek.
            marks(p, z) = 1;
            marks.lock(p, z);
          }
        }
      }
    }
  }

  while (apply_meek(marks)) {
  }

  result.cpdag = Network(n, GraphMode::kDirected);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      if (a != b && marks(a, b)) result.cpdag.add_edge(a, b);
    }
  }
  result.skeleton = std::move(skel);
  return result;
}

Network pc_baseline(const Dataset& ds, const PcOptions& options, InferenceMode mode) {
  PcResult r = pc_stable(ds, options);
  return mode == InferenceMode::kDag ? std::move(r.cpdag) : std::move(r.skeleton);
}

}  // namespace topocausal
