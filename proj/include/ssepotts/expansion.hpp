#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "rational.hpp"

namespace ssepotts {

inline constexpr std::size_t kMaxExhaustiveVertices = 20;

/// Boundary sizes of every vertex subset (bit i = vertex i), by Gray-code
/// style incremental update over the lowest set bit.
inline std::vector<std::int32_t> all_boundary_sizes(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxExhaustiveVertices) throw BudgetError("subset enumeration limited to 20 vertices");
  std::vector<std::uint32_t> nbr(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (Vertex w : g.neighbors(static_cast<Vertex>(v))) nbr[v] |= 1U << w;
  std::vector<std::int32_t> boundary(std::size_t{1} << n, 0);
  for (std::uint32_t s = 1; s < (1U << n); ++s) {
    const int v = std::countr_zero(s);
    const std::uint32_t rest = s & (s - 1);
    const int inside = std::popcount(nbr[v] & rest);
    boundary[s] = boundary[rest] + static_cast<std::int32_t>(g.degree(v)) - 2 * inside;
  }
  return boundary;
}

struct ExpanderCheck {
  bool is_expander = true;
  std::optional<VertexSet> witness;  // a violating set with minimal |∂S|/|S| when not an expander
};

namespace detail {
template <typename Violates>
ExpanderCheck check_expander(const Graph& g, Violates violates) {
  const std::size_t n = g.num_vertices();
  const auto boundary = all_boundary_sizes(g);
  ExpanderCheck out;
  std::uint32_t best = 0;
  for (std::uint32_t s = 1; s < (1U << n); ++s) {
    const int size = std::popcount(s);
    if (2 * static_cast<std::size_t>(size) > n) continue;
    if (!violates(boundary[s], size)) continue;
    if (out.is_expander ||
        static_cast<std::int64_t>(boundary[s]) * std::popcount(best) <
            static_cast<std::int64_t>(boundary[best]) * size) {
      best = s;
      out.is_expander = false;
    }
  }
  if (!out.is_expander) out.witness = VertexSet::from_bits(best);
  return out;
}
}  // namespace detail

/// Exhaustive test that every S with |S| ≤ n/2 has |∂S| ≥ α|S|.
inline ExpanderCheck is_alpha_expander(const Graph& g, const Rational& alpha) {
  if (alpha < Rational(0)) throw PreconditionError("alpha must be nonnegative");
  return detail::check_expander(g, [&](std::int32_t b, int size) { return Rational(b) < alpha * Rational(size); });
}

inline ExpanderCheck is_alpha_expander(const Graph& g, double alpha) {
  if (alpha < 0) throw PreconditionError("alpha must be nonnegative");
  return detail::check_expander(g, [&](std::int32_t b, int size) { return b < alpha * size; });
}

}  // namespace ssepotts
