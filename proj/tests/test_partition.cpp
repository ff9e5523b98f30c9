#include <gtest/gtest.h>

#include <random>

#include <ssepotts/exact_conductance.hpp>
#include <ssepotts/generators.hpp>
#include <ssepotts/partition.hpp>

#include "oracles.hpp"

using namespace ssepotts;

namespace {

void expect_valid(const Graph& g, const ExpanderPartition& p) {
  const std::size_t n = g.num_vertices();
  EXPECT_LT(p.ell(), static_cast<std::size_t>(p.k));
  EXPECT_TRUE(p.report.ok());
  std::vector<int> seen(n, 0);
  for (std::size_t i = 0; i < p.ell(); ++i) {
    for (Vertex v : p.parts[i]) ++seen[v];
    EXPECT_TRUE(p.cores[i].minus(p.parts[i]).empty());
    const auto mask = p.parts[i].mask(n);
    for (Vertex v : p.parts[i])
      EXPECT_GE(static_cast<double>(degree_into(g, v, mask)) + 1e-12, p.constants.tau * g.degree(v));
    EXPECT_TRUE(conductance(g, p.parts[i]).at_most(p.constants.phi_out));
    ASSERT_TRUE(p.report.parts[i].sweep_conductance.has_value());
    EXPECT_FALSE(p.report.parts[i].sweep_conductance->less_than(p.constants.phi_in));
  }
  for (int s : seen) EXPECT_EQ(s, 1);
  EXPECT_LE(p.iterations.main_loop, p.iterations.budget);
}

}  // namespace

TEST(PartitionConstants, Formulae) {
  const std::vector<double> lambda{0.0, 0.5, 0.8, 1.2};
  const auto c = partition_constants(lambda, 3, 2.0);
  EXPECT_DOUBLE_EQ(c.lambda_k, 0.8);
  EXPECT_DOUBLE_EQ(c.lambda_k_minus_1, 0.5);
  EXPECT_DOUBLE_EQ(c.rho_star, std::min(0.08, 30 * 2.0 * 243 * std::sqrt(0.5)));
  EXPECT_DOUBLE_EQ(c.phi_in, 0.8 / (140 * 9));
  EXPECT_DOUBLE_EQ(c.phi_out, 90 * 2.0 * 729 * std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(c.tau, 0.1);
  EXPECT_THROW(partition_constants({0.0, 1e-12, 1.0}, 2, 1.0), PreconditionError);
}

TEST(Partition, CompleteGraphStaysWhole) {
  const Graph g = complete_graph(8);
  const auto p = partition_into_expanders(g, {.k = 2});
  ASSERT_EQ(p.ell(), 1u);
  EXPECT_EQ(p.parts[0], VertexSet::all(8));
  expect_valid(g, p);
  EXPECT_EQ(min_conductance(g).value, Rational(16, 28));
  ASSERT_TRUE(p.report.parts[0].exact_inner_conductance);
  EXPECT_EQ(*p.report.parts[0].exact_inner_conductance, Rational(16, 28));
}

TEST(Partition, SmallDumbbellWithTwoPartsAllowedStaysWhole) {
  // With k = 2 at most one part is possible; the bridge cut (1/21) is far above φ_in.
  const Graph g = clique_chain(2, 5, 1);
  const auto p = partition_into_expanders(g, {.k = 2});
  EXPECT_EQ(p.ell(), 1u);
  expect_valid(g, p);
  EXPECT_GT(1.0 / 21.0, p.constants.phi_in);
}

TEST(Partition, LargeDumbbellSplitsIntoTheTwoCliques) {
  const Graph g = clique_chain(2, 36, 1);
  const auto p = partition_into_expanders(g, {.k = 3});
  ASSERT_EQ(p.ell(), 2u);
  expect_valid(g, p);
  std::vector<Vertex> left(36), right(36);
  for (int i = 0; i < 36; ++i) {
    left[i] = i;
    right[i] = 36 + i;
  }
  EXPECT_TRUE((p.parts[0] == VertexSet(left) && p.parts[1] == VertexSet(right)) ||
              (p.parts[1] == VertexSet(left) && p.parts[0] == VertexSet(right)));
  EXPECT_LT(Rational(1, 1261).to_double(), p.constants.phi_in);
}

TEST(Partition, ZeroLambdaKIsRejected) {
  const Graph g = oracle::graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  EXPECT_THROW(partition_into_expanders(g, {.k = 2}), PreconditionError);
}

TEST(Partition, RandomGraphsSatisfyCertificates) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_connected_graph(8 + trial % 12, 0.3, rng);
    for (int k = 2; k <= 4; ++k) {
      const auto lambda = normalized_laplacian_spectrum(g).values;
      if (lambda[k - 1] <= kZeroEigenvalueTol) continue;
      expect_valid(g, partition_into_expanders(g, {.k = k}));
    }
  }
}

TEST(Partition, RandomRegularGraphs) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Graph g = random_regular(60, 3, seed);
    for (int k = 2; k <= 4; ++k) expect_valid(g, partition_into_expanders(g, {.k = k}));
  }
}

TEST(Partition, DeterministicAcrossRuns) {
  const Graph g = clique_chain(3, 12, 2);
  const auto a = partition_into_expanders(g, {.k = 4});
  const auto b = partition_into_expanders(g, {.k = 4});
  EXPECT_EQ(a.parts, b.parts);
  EXPECT_EQ(a.cores, b.cores);
  EXPECT_EQ(a.iterations.main_loop, b.iterations.main_loop);
}

TEST(VerifyPartition, WholeVertexSetHasZeroOuterConductance) {
  const Graph g = cycle_graph(7);
  const auto c = partition_constants(normalized_laplacian_spectrum(g).values, 2, 1.0);
  const auto rep = verify_partition(g, {VertexSet::all(7)}, c, 2);
  ASSERT_EQ(rep.parts.size(), 1u);
  EXPECT_EQ(rep.parts[0].outer_conductance, Rational(0));
  EXPECT_TRUE(rep.parts[0].outer_ok);
  EXPECT_EQ(rep.parts[0].min_degree_ratio, Rational(1));
}

TEST(VerifyPartition, SplittingATriangleVertexBreaksTheDegreeRatio) {
  // Triangle 0-1-2 with a pendant path; isolating vertex 2 in its own part
  // together with the far end leaves it no neighbours inside its part.
  const Graph g = oracle::graph(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}});
  const auto c = partition_constants(normalized_laplacian_spectrum(g).values, 3, 1.0);
  const auto rep = verify_partition(g, {VertexSet{0, 1, 3}, VertexSet{2, 4}}, c, 3);
  EXPECT_EQ(rep.parts[1].min_degree_ratio, Rational(0));
  EXPECT_FALSE(rep.parts[1].degree_ok);
  EXPECT_FALSE(rep.ok());
}

TEST(VerifyPartition, RejectsNonPartitions) {
  const Graph g = cycle_graph(5);
  const auto c = partition_constants(normalized_laplacian_spectrum(g).values, 2, 1.0);
  EXPECT_THROW(verify_partition(g, {VertexSet{0, 1}, VertexSet{1, 2, 3, 4}}, c, 2), PreconditionError);
  EXPECT_THROW(verify_partition(g, {VertexSet{0, 1}, VertexSet{2, 3}}, c, 2), PreconditionError);
}

TEST(Partition, ConstantCOnlyRescalesOuterQuantities) {
  const Graph g = clique_chain(3, 10, 1);
  const auto a = partition_into_expanders(g, {.k = 3, .C = 1.0});
  const auto b = partition_into_expanders(g, {.k = 3, .C = 0.5});
  EXPECT_DOUBLE_EQ(b.constants.phi_out, a.constants.phi_out / 2);
  if (a.constants.rho_star == b.constants.rho_star) {
    EXPECT_EQ(a.parts, b.parts);
  }
}
