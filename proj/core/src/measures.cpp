#include "topocausal/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "topocausal/parallel.hpp"

namespace topocausal {

namespace {

constexpr double kCorrelationClamp = 1.0 - 1e-12;

// Joint counts of (source state j, target state i) with their margins.
struct PairTable {
  std::size_t source_states = 0;
  std::size_t target_states = 0;
  std::vector<std::size_t> joint;  // [j * target_states + i]
  std::vector<std::size_t> source_margin;
  std::vector<std::size_t> target_margin;
  std::size_t total = 0;

  std::size_t at(std::size_t j, std::size_t i) const { return joint[j * target_states + i]; }
};

PairTable count_pair(const Dataset& ds, std::size_t source, std::size_t target) {
  PairTable t;
  t.source_states = ds.variable(source).states();
  t.target_states = ds.variable(target).states();
  t.joint.assign(t.source_states * t.target_states, 0);
  const auto js = ds.column(source);
  const auto is = ds.column(target);
  const std::size_t stride = t.target_states;
  for (std::size_t r = 0; r < js.size(); ++r) ++t.joint[js[r] * stride + is[r]];

  t.source_margin.assign(t.source_states, 0);
  t.target_margin.assign(t.target_states, 0);
  for (std::size_t j = 0; j < t.source_states; ++j) {
    for (std::size_t i = 0; i < t.target_states; ++i) {
      t.source_margin[j] += t.at(j, i);
      t.target_margin[i] += t.at(j, i);
    }
  }
  t.total = js.size();
  return t;
}

// W(i|j) = n(i,j)/n(j) - (n(i) - n(i,j))/(N - n(j)) from exact counts.
InfluenceValue ni_from_counts(std::size_t n_ij, std::size_t n_j, std::size_t n_i, std::size_t n) {
  if (n_j == 0 || n_j == n) return {};
  const double with = static_cast<double>(n_ij) / static_cast<double>(n_j);
  const double without = static_cast<double>(n_i - n_ij) / static_cast<double>(n - n_j);
  return {with - without, true};
}

// Omega in the source -> target direction of a table; `transposed` reads the
// table with source and target swapped.
EdgeWeight ni_weight(const PairTable& t, std::size_t source, std::size_t target, bool transposed) {
  const std::size_t s_states = transposed ? t.target_states : t.source_states;
  const std::size_t t_states = transposed ? t.source_states : t.target_states;
  const auto& s_margin = transposed ? t.target_margin : t.source_margin;
  const auto& t_margin = transposed ? t.source_margin : t.target_margin;

  EdgeWeight w{source, target, 0.0, std::nullopt};
  double best = -1.0;
  for (std::size_t j = 0; j < s_states; ++j) {
    for (std::size_t i = 0; i < t_states; ++i) {
      const std::size_t n_ij = transposed ? t.at(i, j) : t.at(j, i);
      const InfluenceValue v = ni_from_counts(n_ij, s_margin[j], t_margin[i], t.total);
      if (!v.defined) continue;
      const double a = std::abs(v.value);
      if (a > best) {
        best = a;
        w.argmax = std::make_pair(static_cast<State>(j), static_cast<State>(i));
      }
    }
  }
  if (best > 0.0) w.weight = best;
  return w;
}

__extension__ using Wide = __int128;

// Exact integer moments of a state-code column.
struct Moments {
  std::int64_t sum = 0;
  std::int64_t sum_sq = 0;
};

Moments moments(std::span<const State> col) {
  Moments m;
  for (State s : col) {
    m.sum += s;
    m.sum_sq += static_cast<std::int64_t>(s) * s;
  }
  return m;
}

std::optional<double> pearson_from(std::span<const State> x, std::span<const State> y,
                                   const Moments& mx, const Moments& my) {
  std::int64_t sxy = 0;
  for (std::size_t r = 0; r < x.size(); ++r) sxy += static_cast<std::int64_t>(x[r]) * y[r];
  const auto n = static_cast<Wide>(x.size());
  const Wide cov = n * sxy - static_cast<Wide>(mx.sum) * my.sum;
  const Wide vx = n * mx.sum_sq - static_cast<Wide>(mx.sum) * mx.sum;
  const Wide vy = n * my.sum_sq - static_cast<Wide>(my.sum) * my.sum;
  if (vx == 0 || vy == 0) return std::nullopt;
  const double r = static_cast<double>(cov) / std::sqrt(static_cast<double>(vx) * static_cast<double>(vy));
  return std::clamp(r, -1.0, 1.0);
}

double fisher_z(double r, std::size_t n_rows, std::size_t conditioning) {
  r = std::clamp(r, -kCorrelationClamp, kCorrelationClamp);
  const double z = 0.5 * std::log((1.0 + r) / (1.0 - r));
  return std::sqrt(static_cast<double>(n_rows - conditioning - 3)) * std::abs(z);
}

// First-order partial correlation; nullopt when a variable is fully explained
// by the conditioning variable.
std::optional<double> partial_correlation(double r_ab, double r_ak, double r_bk) {
  const double denom = (1.0 - r_ak * r_ak) * (1.0 - r_bk * r_bk);
  if (!(denom > 0.0)) return std::nullopt;
  return std::clamp((r_ab - r_ak * r_bk) / std::sqrt(denom), -1.0, 1.0);
}

void check_distinct(std::initializer_list<std::size_t> vars) {
  for (auto a = vars.begin(); a != vars.end(); ++a) {
    for (auto b = std::next(a); b != vars.end(); ++b) {
      if (*a == *b) throw std::invalid_argument("measure variables must be pairwise distinct");
    }
  }
}

void check_context(const Dataset& ds, const Assignment& context, std::size_t target, std::size_t source) {
  validate(context, ds);
  if (context.mentions(target) || context.mentions(source))
    throw std::invalid_argument("conditioning set overlaps target or source");
  check_distinct({target, source});
}

}  // namespace

std::string_view to_string(Measure m) {
  return m == Measure::kNetInfluence ? "ni" : "fisher";
}

Measure parse_measure(std::string_view text) {
  if (text == "ni") return Measure::kNetInfluence;
  if (text == "fisher") return Measure::kFisher;
  throw std::invalid_argument("unknown measure '" + std::string(text) + "' (expected ni or fisher)");
}

InfluenceValue net_influence(const Dataset& ds, StateRef target, StateRef source,
                             const Assignment& context, const RowIndex* index) {
  check_context(ds, context, target.var, source.var);
  Assignment with = context;
  with.literals.push_back(is(source.var, source.state));
  Assignment without = context;
  without.literals.push_back(is_not(source.var, source.state));
  const Assignment i{is(target.var, target.state)};
  const auto p_with = prob(ds, i, with, index);
  const auto p_without = prob(ds, i, without, index);
  if (!p_with || !p_without) return {};
  return {*p_with - *p_without, true};
}

InfluenceValue influence_distance(const Dataset& ds, StateRef target, StateRef source,
                                  State source_alt, const Assignment& context, const RowIndex* index) {
  check_context(ds, context, target.var, source.var);
  if (source_alt >= ds.variable(source.var).states())
    throw std::invalid_argument("source state out of range");
  Assignment first = context;
  first.literals.push_back(is(source.var, source.state));
  Assignment second = context;
  second.literals.push_back(is(source.var, source_alt));
  const Assignment i{is(target.var, target.state)};
  const auto p_first = prob(ds, i, first, index);
  const auto p_second = prob(ds, i, second, index);
  if (!p_first || !p_second) return {};
  return {*p_first - *p_second, true};
}

EdgeWeight edge_weight_ni(const Dataset& ds, std::size_t source, std::size_t target) {
  check_distinct({source, target});
  if (source >= ds.n_vars() || target >= ds.n_vars()) throw std::invalid_argument("variable out of range");
  return ni_weight(count_pair(ds, source, target), source, target, false);
}

double conditional_weight_ni(const Dataset& ds, std::size_t source, std::size_t target,
                             std::size_t given) {
  check_distinct({source, target, given});
  const std::size_t sj = ds.variable(source).states();
  const std::size_t si = ds.variable(target).states();
  const std::size_t sk = ds.variable(given).states();
  std::vector<std::size_t> joint(sk * sj * si, 0);
  const auto js = ds.column(source);
  const auto is = ds.column(target);
  const auto ks = ds.column(given);
  for (std::size_t r = 0; r < js.size(); ++r) ++joint[(ks[r] * sj + js[r]) * si + is[r]];

  std::vector<std::size_t> n_jk(sj), n_ik(si);
  double best = 0.0;
  for (std::size_t k = 0; k < sk; ++k) {
    const std::size_t* slab = &joint[k * sj * si];
    std::fill(n_jk.begin(), n_jk.end(), 0);
    std::fill(n_ik.begin(), n_ik.end(), 0);
    std::size_t n_k = 0;
    for (std::size_t j = 0; j < sj; ++j) {
      for (std::size_t i = 0; i < si; ++i) {
        n_jk[j] += slab[j * si + i];
        n_ik[i] += slab[j * si + i];
      }
      n_k += n_jk[j];
    }
    for (std::size_t j = 0; j < sj; ++j) {
      for (std::size_t i = 0; i < si; ++i) {
        const InfluenceValue v = ni_from_counts(slab[j * si + i], n_jk[j], n_ik[i], n_k);
        if (v.defined) best = std::max(best, std::abs(v.value));
      }
    }
  }
  return best;
}

std::optional<double> pearson(const Dataset& ds, std::size_t a, std::size_t b) {
  const auto x = ds.column(a);
  const auto y = ds.column(b);
  return pearson_from(x, y, moments(x), moments(y));
}

InfluenceValue fisher_weight(const Dataset& ds, std::size_t a, std::size_t b,
                             std::optional<std::size_t> given) {
  if (given) {
    check_distinct({a, b, *given});
  } else {
    check_distinct({a, b});
  }
  const std::size_t conditioning = given ? 1 : 0;
  if (ds.n_rows() <= 3 + conditioning)
    throw std::invalid_argument("Fisher weight needs more than 3 + |u| rows");

  const auto r_ab = pearson(ds, a, b);
  if (!r_ab) return {};
  double r = *r_ab;
  if (given) {
    const auto r_ak = pearson(ds, a, *given);
    const auto r_bk = pearson(ds, b, *given);
    if (!r_ak || !r_bk) return {};
    const auto partial = partial_correlation(*r_ab, *r_ak, *r_bk);
    if (!partial) return {};
    r = *partial;
  }
  return {fisher_z(r, ds.n_rows(), conditioning), true};
}

WeightMatrix::WeightMatrix(std::size_t n, Measure measure)
    : n_(n), measure_(measure), entries_(n * n) {
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      entries_[s * n + t].source = s;
      entries_[s * n + t].target = t;
    }
  }
}

double WeightMatrix::pair_weight(std::size_t a, std::size_t b) const {
  return std::max(weight(a, b), weight(b, a));
}

bool operator==(const WeightMatrix& x, const WeightMatrix& y) {
  if (x.n_ != y.n_ || x.measure_ != y.measure_) return false;
  for (std::size_t k = 0; k < x.entries_.size(); ++k) {
    const EdgeWeight& a = x.entries_[k];
    const EdgeWeight& b = y.entries_[k];
    if (a.source != b.source || a.target != b.target || a.argmax != b.argmax) return false;
    // Bitwise comparison: determinism checks must not hide -0.0 or NaN differences.
    if (std::memcmp(&a.weight, &b.weight, sizeof(double)) != 0) return false;
  }
  return true;
}

WeightMatrix weight_matrix(const Dataset& ds, Measure measure, unsigned workers) {
  const std::size_t n = ds.n_vars();
  if (n < 2) throw std::invalid_argument("weight_matrix needs at least 2 variables");
  WeightMatrix w(n, measure);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }

  if (measure == Measure::kNetInfluence) {
    parallel_for(pairs.size(), workers, [&](std::size_t p) {
      const auto [a, b] = pairs[p];
      const PairTable t = count_pair(ds, a, b);
      w.at(a, b) = ni_weight(t, a, b, false);
      w.at(b, a) = ni_weight(t, b, a, true);
    });
    return w;
  }

  if (ds.n_rows() <= 3) throw std::invalid_argument("Fisher weights need more than 3 rows");
  std::vector<Moments> m(n);
  for (std::size_t v = 0; v < n; ++v) m[v] = moments(ds.column(v));
  parallel_for(pairs.size(), workers, [&](std::size_t p) {
    const auto [a, b] = pairs[p];
    const auto r = pearson_from(ds.column(a), ds.column(b), m[a], m[b]);
    const double value = r ? fisher_z(*r, ds.n_rows(), 0) : 0.0;
    w.at(a, b).weight = value;
    w.at(b, a).weight = value;
  });
  return w;
}

}  // namespace topocausal
