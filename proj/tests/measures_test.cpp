#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "topocausal/measures.hpp"
#include "topocausal/synth.hpp"

namespace topocausal {
namespace {

using testing::make_dataset;
using testing::random_dataset;

// Rows (j, i) repeated count[j][i] times.
Dataset from_counts(const std::vector<std::vector<int>>& count) {
  std::vector<std::vector<State>> cols(2);
  for (std::size_t j = 0; j < count.size(); ++j)
    for (std::size_t i = 0; i < count[j].size(); ++i)
      for (int c = 0; c < count[j][i]; ++c) {
        cols[0].push_back(static_cast<State>(j));
        cols[1].push_back(static_cast<State>(i));
      }
  return make_dataset(cols, {count.size(), count.front().size()});
}

// Row-count oracle: P(target=ts | source in `src`, context v=cs).
double cond(const Dataset& ds, std::size_t tv, State ts, std::size_t sv, auto src_pred,
            std::optional<std::pair<std::size_t, State>> ctx) {
  double num = 0, den = 0;
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    if (ctx && ds.at(r, ctx->first) != ctx->second) continue;
    if (!src_pred(ds.at(r, sv))) continue;
    den += 1;
    if (ds.at(r, tv) == ts) num += 1;
  }
  return den > 0 ? num / den : std::nan("");
}

TEST(NetInfluence, DirectFormula) {
  // P(i|j) = 450/500 = 0.9, P(i|not j) = 200/500 = 0.4
  const Dataset ds = from_counts({{450, 50}, {200, 300}});
  const InfluenceValue w = net_influence(ds, {1, 0}, {0, 0});
  ASSERT_TRUE(w.defined);
  EXPECT_NEAR(w.value, 0.5, 1e-15);
}

TEST(NetInfluence, ZeroUnderIndependence) {
  const Dataset ds = from_counts({{30, 70}, {60, 140}});
  for (State j = 0; j < 2; ++j)
    for (State i = 0; i < 2; ++i) EXPECT_EQ(net_influence(ds, {1, i}, {0, j}).value, 0.0);
  EXPECT_EQ(edge_weight_ni(ds, 0, 1).weight, 0.0);
}

TEST(NetInfluence, UndefinedAndErrors) {
  // Context K=1 only occurs with J=0, so P(i | not j, k) has no support.
  const Dataset ds = make_dataset({{0, 1, 0, 1}, {0, 1, 1, 0}, {1, 0, 0, 0}}, {2, 2, 2});
  EXPECT_FALSE(net_influence(ds, {1, 0}, {0, 0}, {is(2, 1)}).defined);
  EXPECT_EQ(net_influence(ds, {1, 0}, {0, 0}, {is(2, 1)}).or_zero(), 0.0);
  EXPECT_THROW(net_influence(ds, {1, 0}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(net_influence(ds, {1, 0}, {0, 1}, {is(1, 0)}), std::invalid_argument);
}

TEST(InfluenceDistance, IdentityAndAntisymmetry) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset ds = random_dataset(rng, 3, 50);
    const StateRef t{0, 0};
    const std::size_t sj = ds.variable(1).states();
    for (State j = 0; j < sj; ++j) {
      EXPECT_EQ(influence_distance(ds, t, {1, j}, j).value, 0.0);
      for (State k = 0; k < sj; ++k) {
        const auto a = influence_distance(ds, t, {1, j}, k);
        const auto b = influence_distance(ds, t, {1, k}, j);
        ASSERT_EQ(a.defined, b.defined);
        if (a.defined) EXPECT_EQ(a.value, -b.value);
      }
    }
  }
}

TEST(NetInfluenceProperty, WeightedMeanFormAgrees) {
  std::mt19937_64 rng(22);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Dataset ds = random_dataset(rng, 3, 40 + trial % 60);
    const bool with_ctx = trial % 2 == 1;
    const State cs = 0;
    std::optional<std::pair<std::size_t, State>> ctx;
    Assignment u;
    if (with_ctx) {
      ctx = std::make_pair(std::size_t{2}, cs);
      u = {is(2, cs)};
    }
    const std::size_t sj = ds.variable(1).states();
    for (State i = 0; i < ds.variable(0).states(); ++i) {
      for (State j = 0; j < sj; ++j) {
        const InfluenceValue w = net_influence(ds, {0, i}, {1, j}, u);
        // Weighted mean: sum_{j' != j} P(j'|u) d(j, j') / sum_{j' != j} P(j'|u), with
        // every quantity counted directly from rows.
        double num = 0, den = 0;
        bool ok = true;
        const double pj = cond(ds, 0, i, 1, [&](State s) { return s == j; }, ctx);
        for (State k = 0; k < sj; ++k) {
          if (k == j) continue;
          double support = 0, total = 0;
          for (std::size_t r = 0; r < ds.n_rows(); ++r) {
            if (with_ctx && ds.at(r, 2) != cs) continue;
            total += 1;
            if (ds.at(r, 1) == k) support += 1;
          }
          if (support == 0) continue;
          const double pk = cond(ds, 0, i, 1, [&](State s) { return s == k; }, ctx);
          if (std::isnan(pj)) ok = false;
          num += (support / total) * (pj - pk);
          den += support / total;
        }
        if (!ok || den == 0) {
          EXPECT_FALSE(w.defined);
          continue;
        }
        ASSERT_TRUE(w.defined);
        EXPECT_NEAR(w.value, num / den, 1e-12);
        EXPECT_GE(w.value, -1.0);
        EXPECT_LE(w.value, 1.0);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 5000);
}

TEST(NetInfluenceProperty, BinaryParentIdentity) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    Dataset ds = random_dataset(rng, 3, 30, 2);
    for (State i = 0; i < 2; ++i)
      for (State j = 0; j < 2; ++j) {
        const auto w = net_influence(ds, {0, i}, {1, j}, {is(2, 1)});
        const auto d = influence_distance(ds, {0, i}, {1, j}, static_cast<State>(1 - j), {is(2, 1)});
        ASSERT_EQ(w.defined, d.defined);
        if (w.defined) EXPECT_EQ(w.value, d.value);
      }
  }
}

TEST(NetInfluenceProperty, ExactZeroOnProductTables) {
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<int> count(1, 9);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t sj = 2 + trial % 3, si = 2 + (trial / 3) % 3, sk = 2;
    std::vector<std::vector<State>> cols(3);
    for (State k = 0; k < sk; ++k) {
      std::vector<int> a(sj), b(si);
      for (int& x : a) x = count(rng);
      for (int& x : b) x = count(rng);
      for (State j = 0; j < sj; ++j)
        for (State i = 0; i < si; ++i)
          for (int c = 0; c < a[j] * b[i]; ++c) {
            cols[0].push_back(j);
            cols[1].push_back(i);
            cols[2].push_back(k);
          }
    }
    const Dataset ds = make_dataset(cols, {sj, si, sk});
    for (State j = 0; j < sj; ++j)
      for (State i = 0; i < si; ++i)
        for (State k = 0; k < sk; ++k) EXPECT_EQ(net_influence(ds, {1, i}, {0, j}, {is(2, k)}).value, 0.0);
    EXPECT_EQ(conditional_weight_ni(ds, 0, 1, 2), 0.0);
  }
}

TEST(EdgeWeightNi, MaxOfAbsolutes) {
  // W(i0|j0) = 0.8 - 0.3 = 0.5, W(i1|j0) = -0.5; binary, so j1 mirrors.
  const Dataset ds = from_counts({{80, 20}, {30, 70}});
  const EdgeWeight e = edge_weight_ni(ds, 0, 1);
  EXPECT_NEAR(e.weight, 0.5, 1e-15);
  ASSERT_TRUE(e.argmax.has_value());
  EXPECT_EQ(*e.argmax, (std::pair<State, State>{0, 0}));
  EXPECT_THROW(edge_weight_ni(ds, 0, 0), std::invalid_argument);
}

TEST(EdgeWeightNi, MatchesExhaustiveLoop) {
  std::mt19937_64 rng(25);
  std::uniform_int_distribution<int> pick_j(0, 2), pick_i(0, 3);
  std::vector<std::vector<State>> cols(2);
  for (int r = 0; r < 500; ++r) {
    const int j = pick_j(rng);
    cols[0].push_back(static_cast<State>(j));
    cols[1].push_back(static_cast<State>((pick_i(rng) + j) % 4));
  }
  const Dataset ds = make_dataset(cols, {3, 4});
  double best = 0;
  for (State j = 0; j < 3; ++j)
    for (State i = 0; i < 4; ++i) {
      const double w = cond(ds, 1, i, 0, [&](State s) { return s == j; }, std::nullopt) -
                       cond(ds, 1, i, 0, [&](State s) { return s != j; }, std::nullopt);
      best = std::max(best, std::abs(w));
    }
  EXPECT_NEAR(edge_weight_ni(ds, 0, 1).weight, best, 1e-15);
}

TEST(EdgeWeightNi, AsymmetryWitness) {
  // I = J mod 2 for a 4-state J: J determines I, I does not determine J.
  std::vector<std::vector<State>> cols(2);
  for (int r = 0; r < 400; ++r) {
    cols[0].push_back(static_cast<State>(r % 4));
    cols[1].push_back(static_cast<State>(r % 2));
  }
  const Dataset ds = make_dataset(cols, {4, 2});
  EXPECT_NE(edge_weight_ni(ds, 0, 1).weight, edge_weight_ni(ds, 1, 0).weight);
}

TEST(ConditionalWeightNi, MatchesTripleLoop) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset ds = random_dataset(rng, 3, 120);
    double best = 0;
    for (State k = 0; k < ds.variable(2).states(); ++k)
      for (State j = 0; j < ds.variable(0).states(); ++j)
        for (State i = 0; i < ds.variable(1).states(); ++i) {
          const auto w = net_influence(ds, {1, i}, {0, j}, {is(2, k)});
          if (w.defined) best = std::max(best, std::abs(w.value));
        }
    EXPECT_NEAR(conditional_weight_ni(ds, 0, 1, 2), best, 1e-15);
  }
}

TEST(Fisher, CopyHitsClamp) {
  const Dataset ds = make_dataset({{0, 1, 0, 1, 1, 0}, {0, 1, 0, 1, 1, 0}}, {2, 2});
  const auto w = fisher_weight(ds, 0, 1);
  ASSERT_TRUE(w.defined);
  EXPECT_NEAR(w.value, std::sqrt(3.0) * std::atanh(1.0 - 1e-12), 1e-9);
}

TEST(Fisher, MatchesFormula) {
  std::mt19937_64 rng(27);
  const Dataset ds = random_dataset(rng, 3, 200);
  auto mean = [&](std::size_t v) {
    double s = 0;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) s += ds.at(r, v);
    return s / ds.n_rows();
  };
  auto corr = [&](std::size_t a, std::size_t b) {
    const double ma = mean(a), mb = mean(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
      const double x = ds.at(r, a) - ma, y = ds.at(r, b) - mb;
      sab += x * y;
      saa += x * x;
      sbb += y * y;
    }
    return sab / std::sqrt(saa * sbb);
  };
  const double r = corr(0, 1);
  EXPECT_NEAR(fisher_weight(ds, 0, 1).value, std::sqrt(197.0) * std::abs(std::atanh(r)), 1e-9);
  const double p = (r - corr(0, 2) * corr(1, 2)) / std::sqrt((1 - corr(0, 2) * corr(0, 2)) * (1 - corr(1, 2) * corr(1, 2)));
  EXPECT_NEAR(fisher_weight(ds, 0, 1, 2).value, std::sqrt(196.0) * std::abs(std::atanh(p)), 1e-9);
}

TEST(Fisher, SymmetricExactly) {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset ds = random_dataset(rng, 3, 50);
    EXPECT_EQ(fisher_weight(ds, 0, 1).value, fisher_weight(ds, 1, 0).value);
    EXPECT_EQ(fisher_weight(ds, 0, 1, 2).value, fisher_weight(ds, 1, 0, 2).value);
  }
}

TEST(Fisher, DeterministicCopiesOfConditionCountAsZero) {
  std::mt19937_64 rng(29);
  std::vector<State> u;
  for (int r = 0; r < 300; ++r) u.push_back(static_cast<State>(r % 3));
  std::shuffle(u.begin(), u.end(), rng);
  const Dataset ds = make_dataset({u, u, u}, {3, 3, 3});
  EXPECT_EQ(fisher_weight(ds, 0, 1, 2).or_zero(), 0.0);
}

TEST(Fisher, NullDistribution) {
  std::mt19937_64 rng(30);
  int above = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    const Dataset ds = random_dataset(rng, 2, 10000);
    if (fisher_weight(ds, 0, 1).value >= 4.0) ++above;
  }
  EXPECT_LE(above, 2);  // 0.1% of 2000
}

TEST(Fisher, DegenerateInputs) {
  const Dataset ds = make_dataset({{0, 1, 0, 1}, {1, 0, 1, 0}, {0, 0, 1, 1}}, {2, 2, 2});
  EXPECT_TRUE(fisher_weight(ds, 0, 1).defined);
  EXPECT_THROW(fisher_weight(ds, 0, 1, 2), std::invalid_argument);  // n_rows <= 3 + |u|
  EXPECT_THROW(fisher_weight(ds, 0, 0), std::invalid_argument);
}

TEST(WeightMatrix, NiEntriesEqualEdgeWeights) {
  std::mt19937_64 rng(31);
  const Dataset ds = random_dataset(rng, 3, 300);
  const WeightMatrix m = weight_matrix(ds, Measure::kNetInfluence, 1);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      if (a == b) continue;
      const EdgeWeight e = edge_weight_ni(ds, a, b);
      EXPECT_EQ(m.weight(a, b), e.weight);
      EXPECT_EQ(m.at(a, b).argmax, e.argmax);
    }
}

TEST(WeightMatrix, FisherSymmetricAndWorkerIndependent) {
  GenSpec spec;
  spec.n_nodes = 25;
  spec.n_rows = 3000;
  const Dataset ds = generate(spec).second;
  for (Measure m : {Measure::kFisher, Measure::kNetInfluence}) {
    const WeightMatrix one = weight_matrix(ds, m, 1);
    for (unsigned w : {2u, 3u, 8u}) EXPECT_TRUE(one == weight_matrix(ds, m, w));
    if (m == Measure::kFisher)
      for (std::size_t a = 0; a < 25; ++a)
        for (std::size_t b = 0; b < 25; ++b) EXPECT_EQ(one.weight(a, b), one.weight(b, a));
  }
}

TEST(MeasureNames, Parse) {
  EXPECT_EQ(parse_measure("ni"), Measure::kNetInfluence);
  EXPECT_EQ(parse_measure("fisher"), Measure::kFisher);
  EXPECT_THROW(parse_measure("mi"), std::invalid_argument);
  EXPECT_EQ(to_string(Measure::kFisher), "fisher");
}

}  // namespace
}  // namespace topocausal
