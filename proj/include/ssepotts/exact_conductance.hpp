#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "expansion.hpp"
#include "graph.hpp"
#include "rational.hpp"

namespace ssepotts {

struct ConductanceMinimum {
  Rational value;
  VertexSet set;
};

namespace detail {
inline std::vector<std::int64_t> all_volumes(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::int64_t> vol(std::size_t{1} << n, 0);
  for (std::uint32_t s = 1; s < (1U << n); ++s) vol[s] = vol[s & (s - 1)] + g.degree(std::countr_zero(s));
  return vol;
}
}  // namespace detail

/// φ(G): minimum of |∂S|/vol(S) over nonempty S with vol(S) ≤ vol(V)/2.
/// Ties resolve to the smallest subset in bit order.
inline ConductanceMinimum min_conductance(const Graph& g) {
  if (g.num_vertices() > kMaxExhaustiveVertices) throw BudgetError("min_conductance limited to 20 vertices");
  const auto boundary = all_boundary_sizes(g);
  const auto vol = detail::all_volumes(g);
  const std::int64_t half = total_volume(g);
  bool found = false;
  std::uint32_t best = 0;
  for (std::uint32_t s = 1; s < boundary.size(); ++s) {
    if (vol[s] == 0 || 2 * vol[s] > half) continue;
    if (!found || static_cast<std::int64_t>(boundary[s]) * vol[best] <
                      static_cast<std::int64_t>(boundary[best]) * vol[s]) {
      best = s;
      found = true;
    }
  }
  if (!found) throw PreconditionError("min_conductance: no set with positive volume at most half");
  return {Rational(boundary[best], vol[best]), VertexSet::from_bits(best)};
}

/// Expansion profile: minimum conductance over nonempty S with 0 < vol(S) ≤ bound.
inline Rational expansion_profile(const Graph& g, const Rational& bound) {
  if (g.num_vertices() > kMaxExhaustiveVertices) throw BudgetError("expansion_profile limited to 20 vertices");
  const auto boundary = all_boundary_sizes(g);
  const auto vol = detail::all_volumes(g);
  bool found = false;
  Rational best;
  for (std::uint32_t s = 1; s < boundary.size(); ++s) {
    if (vol[s] == 0 || Rational(vol[s]) > bound) continue;
    const Rational phi(boundary[s], vol[s]);
    if (!found || phi < best) best = phi;
    found = true;
  }
  if (!found) throw PreconditionError("expansion_profile: no set within the volume bound");
  return best;
}

/// ρ_G(k): minimum over k disjoint nonempty sets of their largest conductance.
/// Binary search over the distinct conductance values; for a candidate t a
/// subset DP decides whether k disjoint sets of conductance ≤ t exist.
inline Rational k_way_expansion(const Graph& g, int k) {
  const std::size_t n = g.num_vertices();
  if (n > 14) throw BudgetError("k_way_expansion limited to 14 vertices");
  if (k < 1 || static_cast<std::size_t>(k) > n) throw PreconditionError("k_way_expansion: need 1 <= k <= n");
  const auto boundary = all_boundary_sizes(g);
  const auto vol = detail::all_volumes(g);
  const std::uint32_t full = (1U << n) - 1;
  std::vector<Rational> phi(full + 1);
  std::vector<Rational> values;
  for (std::uint32_t s = 1; s <= full; ++s) {
    if (vol[s] == 0) continue;
    phi[s] = Rational(boundary[s], vol[s]);
    values.push_back(phi[s]);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<std::uint8_t> most(full + 1);
  auto feasible = [&](const Rational& t) {
    // most[mask] = max number of disjoint good sets inside mask (capped at k).
    most[0] = 0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const std::uint32_t low = mask & (~mask + 1);
      std::uint8_t best = most[mask & ~low];
      const std::uint32_t rest = mask & ~low;
      for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
        const std::uint32_t s = sub | low;
        if (vol[s] > 0 && phi[s] <= t) best = std::max<std::uint8_t>(best, 1 + most[mask & ~s]);
        if (best >= k || sub == 0) break;
      }
      most[mask] = std::min<std::uint8_t>(best, static_cast<std::uint8_t>(k));
    }
    return most[full] >= k;
  };
  std::size_t lo = 0, hi = values.size() - 1;
  if (!feasible(values[hi])) throw PreconditionError("k_way_expansion: fewer than k disjoint sets of positive volume");
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(values[mid])) hi = mid; else lo = mid + 1;
  }
  return values[lo];
}

}  // namespace ssepotts
