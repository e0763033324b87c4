#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "topocausal/pc.hpp"
#include "topocausal/synth.hpp"

namespace topocausal {
namespace {

// A -> C <- B, C -> D over codes where C = A + B and D = C, each kept with
// probability 0.9 and otherwise redrawn uniformly.
Dataset collider_with_tail(std::uint64_t seed, std::size_t rows) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> bit(0, 1), three(0, 2);
  std::bernoulli_distribution keep(0.9);
  std::vector<std::vector<State>> cols(4);
  for (std::size_t r = 0; r < rows; ++r) {
    const int a = bit(rng), b = bit(rng);
    const int c = keep(rng) ? a + b : three(rng);
    const int d = keep(rng) ? c : three(rng);
    cols[0].push_back(static_cast<State>(a));
    cols[1].push_back(static_cast<State>(b));
    cols[2].push_back(static_cast<State>(c));
    cols[3].push_back(static_cast<State>(d));
  }
  return testing::make_dataset(cols, {2, 2, 3, 3});
}

TEST(FisherZ, IndependentAndDependent) {
  const Dataset ds = collider_with_tail(1, 10000);
  EXPECT_TRUE(fisher_z_independent(ds, 0, 1, {}, 0.05));
  EXPECT_FALSE(fisher_z_independent(ds, 0, 2, {}, 0.05));
  EXPECT_FALSE(fisher_z_independent(ds, 0, 1, {2}, 0.05));  // conditioning on a collider
  EXPECT_TRUE(fisher_z_independent(ds, 0, 3, {2}, 0.05));
}

TEST(PcStable, ColliderAndMeekR1) {
  const Dataset ds = collider_with_tail(2, 10000);
  const PcResult r = pc_stable(ds);
  Network skeleton(4, GraphMode::kUndirected);
  skeleton.add_edge(0, 2);
  skeleton.add_edge(1, 2);
  skeleton.add_edge(2, 3);
  EXPECT_EQ(r.skeleton, skeleton);
  EXPECT_EQ(r.cpdag.edges(), (std::vector<Edge>{{0, 2}, {1, 2}, {2, 3}}));
  EXPECT_GT(r.ci_tests, 0u);
  EXPECT_EQ(pc_baseline(ds, {}, InferenceMode::kDag), r.cpdag);
  EXPECT_EQ(pc_baseline(ds, {}, InferenceMode::kSkeleton), r.skeleton);
}

TEST(PcStable, StrongChainSkeleton) {
  Network dag(5, GraphMode::kDirected);
  for (NodeId v = 0; v < 4; ++v) dag.add_edge(v, v + 1);
  GroundTruth gt;
  gt.dag = dag;
  gt.states.assign(5, 2);
  for (NodeId v = 0; v < 5; ++v) {
    Cpt c;
    if (v == 0) {
      c.rows = {{0.5, 0.5}};
    } else {
      c.parents = {v - 1};
      c.parent_states = {2};
      c.rows = {{0.92, 0.08}, {0.08, 0.92}};
    }
    gt.cpts.push_back(c);
  }
  const Dataset ds = sample(gt, 10000, 5);
  const PcResult r = pc_stable(ds);
  EXPECT_EQ(r.skeleton, dag.skeleton());
  // No v-structure: the chain stays unoriented, reported both ways.
  EXPECT_EQ(r.cpdag.edge_count(), 8u);
}

TEST(PcStable, NullDataGivesEmptySkeleton) {
  // Size check: the empty-skeleton rate on two independent columns is the
  // test's 1 - alpha, so allow three binomial standard errors below 0.95.
  int empty = 0;
  const int seeds = 2000;
  for (int s = 0; s < seeds; ++s) {
    std::mt19937_64 rng(1000 + s);
    const Dataset ds = testing::random_dataset(rng, 2, 10000);
    empty += pc_stable(ds).skeleton.edge_count() == 0;
  }
  EXPECT_GE(static_cast<double>(empty) / seeds, 0.95 - 3 * std::sqrt(0.95 * 0.05 / seeds));
}

TEST(PcStable, InvariantUnderColumnPermutation) {
  GenSpec spec;
  spec.n_nodes = 15;
  spec.n_rows = 3000;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    spec.seed = 50 + seed;
    const Dataset ds = generate(spec).second;
    const PcResult base = pc_stable(ds);
    std::vector<std::size_t> perm(15);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    const PcResult shuffled = pc_stable(ds.select(perm));
    Network back(15, GraphMode::kUndirected);
    for (const Edge& e : shuffled.skeleton.edges()) back.add_edge(perm[e.from], perm[e.to]);
    // Only the skeleton is order-independent; orientation conflicts may
    // resolve differently.
    EXPECT_EQ(back, base.skeleton);
  }
}

TEST(PcStable, MaxConditionSize) {
  const Dataset ds = collider_with_tail(3, 10000);
  PcOptions opt;
  opt.max_condition_size = 0;
  const PcResult r = pc_stable(ds, opt);
  // Without conditioning, A-D and B-D stay (both are marginally dependent on D).
  EXPECT_TRUE(r.skeleton.has_edge(0, 3));
  EXPECT_TRUE(r.skeleton.has_edge(1, 3));
}

}  // namespace
}  // namespace topocausal
