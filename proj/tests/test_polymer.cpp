#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <ssepotts/generators.hpp>
#include <ssepotts/polymer.hpp>

#include "oracles.hpp"

using namespace ssepotts;

namespace {

/// Every connected small subset of size ≤ max_size, by scanning all subsets.
std::vector<VertexSet> naive_polymers(const Graph& g, const PartIndex& idx, std::size_t max_size) {
  std::vector<VertexSet> out;
  const std::size_t n = g.num_vertices();
  for (std::uint64_t s = 1; s < (1ULL << n); ++s) {
    if (static_cast<std::size_t>(__builtin_popcountll(s)) > max_size) continue;
    const VertexSet set = VertexSet::from_bits(s);
    if (oracle::connected(g, s) && is_small(set, idx)) out.push_back(set);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Σ over λ on U avoiding the boundary colours of e^{β·(monochromatic edges touching U)}.
double naive_log_r(const Graph& g, const std::vector<int>& boundary, const VertexSet& u, int q, double beta) {
  std::vector<double> terms;
  std::vector<int> col = boundary;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == u.size()) {
      int mono = 0;
      for (const Edge& e : g.edges())
        if ((u.contains(e.u) || u.contains(e.v)) && col[e.u] == col[e.v]) ++mono;
      terms.push_back(beta * mono);
      return;
    }
    for (int c = 0; c < q; ++c) {
      if (c == boundary[u[i]]) continue;
      col[u[i]] = c;
      self(self, i + 1);
    }
    col[u[i]] = boundary[u[i]];
  };
  rec(rec, 0);
  return oracle::lse(terms);
}

PartIndex halves(std::size_t n) {
  std::vector<Vertex> a, b;
  for (std::size_t v = 0; v < n; ++v) (v < (n + 1) / 2 ? a : b).push_back(static_cast<Vertex>(v));
  return PartIndex(n, {VertexSet(a), VertexSet(b)});
}

}  // namespace

TEST(MonochromaticEdges, Examples) {
  const Graph k3 = complete_graph(3);
  EXPECT_EQ(monochromatic_edges(k3, std::vector<int>{0, 0, 0}), 3u);
  EXPECT_EQ(monochromatic_edges(cycle_graph(4), std::vector<int>{0, 1, 0, 1}), 0u);
  EXPECT_EQ(monochromatic_edges(k3, std::vector<int>{0, 0, 1}), 1u);
  EXPECT_THROW(monochromatic_edges(k3, std::vector<int>{0, 0}), PreconditionError);
}

TEST(SmallSparse, Examples) {
  const Graph c6 = cycle_graph(6);
  const auto idx = PartIndex::single(6);
  EXPECT_TRUE(is_small(VertexSet{}, idx));
  EXPECT_TRUE(is_sparse(c6, VertexSet{}, idx));
  const VertexSet dominoes{0, 1, 3, 4};
  EXPECT_FALSE(is_small(dominoes, idx));
  EXPECT_TRUE(is_sparse(c6, dominoes, idx));
  EXPECT_FALSE(is_small(VertexSet::all(6), idx));
}

TEST(SmallSparse, SmallImpliesSparse) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = oracle::random_graph(4 + trial % 8, 0.35, rng);
    const auto idx = trial % 2 ? PartIndex::single(g.num_vertices()) : halves(g.num_vertices());
    for (std::uint64_t s = 0; s < (1ULL << g.num_vertices()); ++s) {
      const VertexSet u = VertexSet::from_bits(s);
      if (is_small(u, idx)) {
        EXPECT_TRUE(is_sparse(g, u, idx));
      }
    }
  }
}

TEST(Compatible, Examples) {
  const Graph c6 = cycle_graph(6);
  EXPECT_FALSE(compatible(c6, VertexSet{0}, VertexSet{0}));
  EXPECT_TRUE(compatible(c6, VertexSet{0}, VertexSet{3}));
  EXPECT_FALSE(compatible(c6, VertexSet{0}, VertexSet{1}));
  EXPECT_TRUE(compatible(c6, VertexSet{0}, VertexSet{2}));
  EXPECT_FALSE(compatible(c6, VertexSet{0, 1}, VertexSet{2}));
}

TEST(Compatible, EquivalentToDistanceAtLeastTwo) {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = oracle::random_graph(5 + trial % 8, 0.3, rng);
    const std::size_t n = g.num_vertices();
    for (int rep = 0; rep < 50; ++rep) {
      const VertexSet a = VertexSet::from_bits(rng() & ((1ULL << n) - 1));
      const VertexSet b = VertexSet::from_bits(rng() & ((1ULL << n) - 1));
      bool far = a.intersect(b).empty();
      for (Vertex u : a)
        for (Vertex v : b)
          if (g.has_edge(u, v)) far = false;
      EXPECT_EQ(compatible(g, a, b), far);
    }
  }
}

TEST(RestrictedPartitionFunction, Examples) {
  const Graph k3 = complete_graph(3);
  const auto idx = PartIndex::single(3);
  EXPECT_DOUBLE_EQ(restricted_log_partition_function(k3, idx, {0}, VertexSet{}, 2, 3.0), 0.0);
  EXPECT_NEAR(restricted_log_partition_function(k3, idx, {0}, VertexSet{1}, 2, 3.0), 0.0, 1e-15);
  EXPECT_NEAR(restricted_log_partition_function(k3, idx, {0}, VertexSet{1}, 3, 3.0), std::log(2.0), 1e-15);
  const auto big = VertexSet::all(21);
  EXPECT_THROW(restricted_histogram(cycle_graph(21), std::vector<int>(21, 0), big, 2), BudgetError);
}

TEST(RestrictedPartitionFunction, AgreesWithNaiveEnumeration) {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = oracle::random_graph(4 + trial % 6, 0.4, rng);
    const std::size_t n = g.num_vertices();
    const int q = 2 + trial % 3;
    std::vector<int> boundary(n);
    for (auto& c : boundary) c = static_cast<int>(rng() % q);
    const VertexSet u = VertexSet::from_bits(rng() & ((1ULL << n) - 1));
    const double beta = 0.3 + trial * 0.1;
    EXPECT_NEAR(restricted_log_partition_function(g, boundary, u, q, beta), naive_log_r(g, boundary, u, q, beta),
                1e-9);
  }
}

TEST(PolymerWeight, Examples) {
  const Graph k3 = complete_graph(3);
  const auto idx = PartIndex::single(3);
  EXPECT_NEAR(polymer_log_weight(k3, idx, {0}, VertexSet{0}, 2, 10.0), -20.0, 1e-12);
  // q = 2 and a single-part ground state: every closure edge of a singleton is bichromatic.
  const Graph c5 = cycle_graph(5);
  EXPECT_NEAR(polymer_log_weight(c5, PartIndex::single(5), {1}, VertexSet{2}, 2, 1.7), -1.7 * 2, 1e-12);
}

TEST(PolymerWeight, LargeBetaHasNoCancellation) {
  const Graph k4 = complete_graph(4);
  const double lw = polymer_log_weight(k4, PartIndex::single(4), {0}, VertexSet{0, 1}, 3, 1e8);
  // λ on {0,1} with λ ≠ 0: both 1 or both 2 gives one monochromatic edge out of 5 closure edges.
  EXPECT_NEAR(lw, std::log(2.0) - 4e8, 1e-6);
}

TEST(PolymerWeight, BoundedByExpansion) {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = oracle::random_connected_graph(5 + trial % 6, 0.45, rng);
    const std::size_t n = g.num_vertices();
    const int q = 2 + trial % 2;
    const bool two = trial % 3 == 0;
    const PartIndex idx = two ? halves(n) : PartIndex::single(n);
    double alpha = oracle::edge_expansion(g).to_double();
    if (two) {
      alpha = 1e9;
      for (const auto& p : idx.parts) {
        const auto sub = induced_subgraph(g, p, true);
        alpha = std::min(alpha, sub.graph.num_vertices() < 2 ? 1e9 : oracle::edge_expansion(sub.graph).to_double());
      }
    }
    const double beta = 0.5 + 0.25 * trial;
    for (std::uint64_t r = 0; r < ground_state_count(q, idx.count()); ++r) {
      const auto psi = ground_state_at(r, q, idx.count());
      for (const auto& p : enumerate_polymers(g, idx, n)) {
        const double bound = static_cast<double>(p.size()) * (std::log(q - 1.0) - beta * alpha);
        EXPECT_LE(polymer_log_weight(g, idx, psi, p.vertices, q, beta), bound + 1e-9);
      }
    }
  }
}

TEST(KoteckyPreiss, Examples) {
  EXPECT_TRUE(kp_verified(2, 2, 1.0, 6.0));
  EXPECT_NEAR(kp_exponent(2, 2, 1.0, 6.0), -3 + std::log(2.0), 1e-12);
  EXPECT_FALSE(kp_verified(3, 4, 1.0, 0.0));
  EXPECT_THROW(kp_verified(2, 2, 0.0, 1.0), PreconditionError);
}

TEST(KoteckyPreiss, SufficientThresholdPasses) {
  for (int q = 2; q <= 10; ++q)
    for (std::size_t delta = 1; delta <= 10; ++delta)
      for (double alpha : {0.1, 1.0, 3.0}) {
        const double beta = (4 + 2 * std::log(static_cast<double>(q) * delta)) / alpha;
        EXPECT_TRUE(kp_verified(q, delta, alpha, beta)) << q << ' ' << delta;
      }
}

TEST(EnumeratePolymers, CycleFourUpToPairs) {
  const auto ps = enumerate_polymers(cycle_graph(4), PartIndex::single(4), 2);
  std::vector<VertexSet> got;
  for (const auto& p : ps) got.push_back(p.vertices);
  const std::vector<VertexSet> want{{0}, {0, 1}, {0, 3}, {1}, {1, 2}, {2}, {2, 3}, {3}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(got.size(), 8u);
  EXPECT_TRUE(enumerate_polymers(cycle_graph(4), PartIndex::single(4), 0).empty());
  EXPECT_THROW(enumerate_polymers(cycle_graph(4), PartIndex::single(4), 21), BudgetError);
}

TEST(EnumeratePolymers, MatchesSubsetScan) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = oracle::random_graph(4 + trial % 10, 0.3, rng);
    const std::size_t n = g.num_vertices();
    const PartIndex idx = trial % 2 ? halves(n) : PartIndex::single(n);
    const std::size_t max_size = 1 + trial % 6;
    const auto ps = enumerate_polymers(g, idx, max_size);
    std::vector<VertexSet> got;
    for (const auto& p : ps) {
      got.push_back(p.vertices);
      EXPECT_EQ(p.mask, to_mask(p.vertices));
      EXPECT_EQ(p.closure_size, closure_size(g, p.vertices));
    }
    EXPECT_EQ(got, naive_polymers(g, idx, max_size));
  }
}

TEST(EnumeratePolymers, CountContainingVertexBoundedByEDeltaPowers) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = oracle::random_graph(6 + trial % 9, 0.3, rng);
    const std::size_t n = g.num_vertices();
    const auto ps = enumerate_polymers(g, PartIndex::single(n), n / 2);
    const double e_delta = std::exp(1.0) * g.max_degree();
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t t = 1; t <= n / 2; ++t) {
        std::size_t count = 0;
        for (const auto& p : ps) count += p.size() == t && p.vertices.contains(static_cast<Vertex>(v));
        EXPECT_LE(static_cast<double>(count), std::pow(e_delta, static_cast<double>(t)));
      }
  }
}
