#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <ssepotts/exact_conductance.hpp>
#include <ssepotts/expansion.hpp>
#include <ssepotts/generators.hpp>
#include <ssepotts/spectrum.hpp>

#include "oracles.hpp"

using namespace ssepotts;

namespace {
Graph two_triangles() { return oracle::graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }
}  // namespace

TEST(AlphaExpander, Examples) {
  EXPECT_TRUE(is_alpha_expander(complete_graph(4), 2.0).is_expander);
  EXPECT_FALSE(is_alpha_expander(complete_graph(4), Rational(201, 100)).is_expander);
  EXPECT_TRUE(is_alpha_expander(two_triangles(), 0.0).is_expander);
  const auto check = is_alpha_expander(two_triangles(), 0.1);
  EXPECT_FALSE(check.is_expander);
  ASSERT_TRUE(check.witness.has_value());
  EXPECT_EQ(*check.witness, (VertexSet{0, 1, 2}));
  EXPECT_THROW(is_alpha_expander(cycle_graph(21), 0.1), BudgetError);
}

TEST(AlphaExpander, MatchesBruteForceEdgeExpansion) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = oracle::random_graph(4 + trial % 9, 0.35, rng);
    const Rational h = oracle::edge_expansion(g);
    EXPECT_TRUE(is_alpha_expander(g, h).is_expander);
    const auto above = is_alpha_expander(g, h + Rational(1, 1000));
    EXPECT_FALSE(above.is_expander);
    ASSERT_TRUE(above.witness);
    EXPECT_EQ(Rational(boundary_size(g, *above.witness), static_cast<std::int64_t>(above.witness->size())), h);
  }
}

TEST(AlphaExpander, MinDegreeTimesConductanceOnAllSmallGraphs) {
  // |∂S| ≥ φ(G)·vol(S) ≥ φ(G)·δ·|S| for |S| ≤ n/2 on every graph with n ≤ 12.
  std::mt19937_64 rng(43);
  for (std::size_t n = 2; n <= 5; ++n)
    for (const Graph& g : oracle::all_graphs(n)) {
      const Rational alpha = Rational(static_cast<std::int64_t>(g.min_degree())) * min_conductance(g).value;
      EXPECT_TRUE(is_alpha_expander(g, alpha).is_expander);
    }
  for (int trial = 0; trial < 60; ++trial) {
    const Graph g = oracle::random_graph(6 + trial % 7, 0.3, rng);
    const Rational alpha = Rational(static_cast<std::int64_t>(g.min_degree())) * min_conductance(g).value;
    EXPECT_TRUE(is_alpha_expander(g, alpha).is_expander);
  }
}

TEST(MinConductance, Examples) {
  const auto k4 = min_conductance(complete_graph(4));
  EXPECT_EQ(k4.value, Rational(2, 3));
  EXPECT_EQ(k4.set.size(), 2u);
  EXPECT_EQ(min_conductance(two_triangles()).value, Rational(0));
  EXPECT_EQ(min_conductance(cycle_graph(6)).value, Rational(1, 3));
  EXPECT_THROW(min_conductance(cycle_graph(21)), BudgetError);
}

TEST(MinConductance, AgreesWithOracleAndWitness) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = oracle::random_graph(3 + trial % 10, 0.35, rng);
    const auto got = min_conductance(g);
    EXPECT_EQ(got.value, oracle::min_conductance(g));
    EXPECT_EQ(conductance(g, got.set), got.value);
    EXPECT_LE(2 * volume(g, got.set), total_volume(g));
  }
}

TEST(ExpansionProfile, MonotoneAndEndpoints) {
  const Graph g = cycle_graph(8);
  EXPECT_EQ(expansion_profile(g, Rational(2)), Rational(1));
  EXPECT_EQ(expansion_profile(g, Rational(8)), min_conductance(g).value);
  EXPECT_EQ(expansion_profile(g, Rational(16)), Rational(0));
  Rational prev(1);
  for (int b = 2; b <= 16; ++b) {
    const Rational v = expansion_profile(g, Rational(b));
    EXPECT_LE(v, prev);
    prev = v;
  }
  EXPECT_THROW(expansion_profile(g, Rational(1)), PreconditionError);
}

TEST(KWayExpansion, SmallCases) {
  EXPECT_EQ(k_way_expansion(two_triangles(), 2), Rational(0));
  EXPECT_EQ(k_way_expansion(complete_graph(4), 1), Rational(0));
  // K_4 into 2 sets: best is two pairs, each with conductance 4/6.
  EXPECT_EQ(k_way_expansion(complete_graph(4), 2), Rational(2, 3));
  // Singletons always have conductance 1.
  EXPECT_EQ(k_way_expansion(complete_graph(4), 4), Rational(1));
}

TEST(KWayExpansion, MatchesNaiveForTwoSets) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 15; ++trial) {
    const Graph g = oracle::random_graph(5 + trial % 4, 0.4, rng);
    const std::size_t n = g.num_vertices();
    bool first = true;
    Rational best;
    for (std::uint64_t a = 1; a < (1ULL << n); ++a)
      for (std::uint64_t b = a + 1; b < (1ULL << n); ++b) {
        if (a & b) continue;
        const Rational pa(oracle::boundary(g, a), oracle::volume(g, a));
        const Rational pb(oracle::boundary(g, b), oracle::volume(g, b));
        const Rational worst = std::max(pa, pb);
        if (first || worst < best) best = worst;
        first = false;
      }
    EXPECT_EQ(k_way_expansion(g, 2), best);
  }
}

TEST(KWayExpansion, HigherOrderLowerBound) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 12; ++trial) {
    const Graph g = oracle::random_graph(6 + trial % 5, 0.35, rng);
    const auto lambda = normalized_laplacian_spectrum(g).values;
    for (int k = 2; k <= 4; ++k) EXPECT_LE(lambda[k - 1] / 2, k_way_expansion(g, k).to_double() + 1e-12);
  }
}

TEST(Cheeger, SandwichOnRandomGraphs) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = oracle::random_graph(4 + trial % 11, 0.3, rng);
    const double l2 = normalized_laplacian_spectrum(g).values[1];
    const double phi = min_conductance(g).value.to_double();
    EXPECT_LE(l2 / 2, phi + 1e-12);
    EXPECT_LE(phi, std::sqrt(2 * std::max(l2, 0.0)) + 1e-12);
  }
}
