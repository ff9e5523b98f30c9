#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "ground_state.hpp"
#include "logmath.hpp"

namespace ssepotts {

using Mask = std::uint64_t;

inline constexpr std::size_t kMaxMaskVertices = 64;
inline constexpr std::size_t kRestrictedCap = 20;
inline constexpr std::size_t kPolymerSizeCap = 20;
inline constexpr std::size_t kPolymerCountBudget = 5'000'000;
inline constexpr std::uint64_t kRestrictedStateBudget = 100'000'000;

inline void require_mask_graph(const Graph& g) {
  if (g.num_vertices() > kMaxMaskVertices)
    throw BudgetError("polymer enumeration supports at most " + std::to_string(kMaxMaskVertices) + " vertices");
}

inline Mask to_mask(const VertexSet& s) {
  Mask m = 0;
  for (Vertex v : s) m |= Mask{1} << v;
  return m;
}

/// N[S]: S together with every neighbour of S.
inline Mask closed_neighbourhood(const Graph& g, Mask s) {
  Mask out = s;
  for (Mask rest = s; rest != 0; rest &= rest - 1) {
    const int v = std::countr_zero(rest);
    for (Vertex w : g.neighbors(v)) out |= Mask{1} << w;
  }
  return out;
}

inline std::size_t monochromatic_edges(const Graph& g, std::span<const int> colouring) {
  if (colouring.size() != g.num_vertices()) throw PreconditionError("colouring does not cover every vertex");
  std::size_t count = 0;
  for (const Edge& e : g.edges())
    if (colouring[e.u] == colouring[e.v]) ++count;
  return count;
}

/// m_G(ψ) for a ground state.
inline std::size_t ground_state_monochromatic(const Graph& g, const PartIndex& index, const GroundState& psi) {
  return monochromatic_edges(g, ground_state_colouring(index, psi));
}

inline bool is_small(const VertexSet& u, const PartIndex& index) {
  u.check_range(index.n);
  std::vector<std::size_t> hits(index.count(), 0);
  for (Vertex v : u) ++hits[index.part_of[v]];
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (2 * hits[i] > index.part_size(i)) return false;
  return true;
}

inline bool is_sparse(const Graph& g, const VertexSet& u, const PartIndex& index) {
  if (u.empty()) return true;
  for (const auto& comp : components(g, u))
    if (!is_small(comp, index)) return false;
  return true;
}

/// Disjoint vertex sets whose edge boundaries share no edge.
inline bool compatible(const Graph& g, const VertexSet& a, const VertexSet& b) {
  if (!a.intersect(b).empty()) return false;
  const auto ma = a.mask(g.num_vertices());
  const auto mb = b.mask(g.num_vertices());
  for (const Edge& e : g.edges()) {
    const bool in_a = ma[e.u] != ma[e.v];
    const bool in_b = mb[e.u] != mb[e.v];
    if (in_a && in_b) return false;
  }
  return true;
}

/// Histogram over λ : U → [q] with λ(v) ≠ boundary(v) of the number of
/// monochromatic edges touching U, vertices outside U coloured by `boundary`.
inline std::vector<std::uint64_t> restricted_histogram(const Graph& g, std::span<const int> boundary,
                                                       const VertexSet& u, int q) {
  const std::size_t n = g.num_vertices();
  if (boundary.size() != n) throw PreconditionError("boundary colouring does not cover every vertex");
  if (q < 2) throw PreconditionError("q must be at least 2");
  u.check_range(n);
  if (u.size() > kRestrictedCap)
    throw BudgetError("restricted partition function limited to |U| <= " + std::to_string(kRestrictedCap));
  double states = std::pow(static_cast<double>(q - 1), static_cast<double>(u.size()));
  if (states > static_cast<double>(kRestrictedStateBudget))
    throw BudgetError("restricted partition function exceeds the state budget");

  std::vector<int> pos(n, -1);
  for (std::size_t i = 0; i < u.size(); ++i) pos[u[i]] = static_cast<int>(i);
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(closure_size(g, u)) + 1, 0);
  if (u.empty()) {
    hist[0] = 1;
    return hist;
  }
  std::vector<int> lambda(u.size(), 0);

  auto gain = [&](std::size_t i, int c) {
    std::size_t add = 0;
    for (Vertex w : g.neighbors(u[i])) {
      const int j = pos[w];
      if (j < 0) {
        if (boundary[w] == c) ++add;
      } else if (static_cast<std::size_t>(j) < i && lambda[j] == c) {
        ++add;
      }
    }
    return add;
  };
  auto rec = [&](auto&& self, std::size_t i, std::size_t mono) -> void {
    if (i == u.size()) {
      ++hist[mono];
      return;
    }
    for (int c = 0; c < q; ++c) {
      if (c == boundary[u[i]]) continue;
      lambda[i] = c;
      self(self, i + 1, mono + gain(i, c));
    }
  };
  rec(rec, 0, 0);
  return hist;
}

inline double restricted_log_partition_function(const Graph& g, std::span<const int> boundary, const VertexSet& u,
                                                int q, double beta) {
  const auto hist = restricted_histogram(g, boundary, u, q);
  return log_from_histogram(hist, beta);
}

inline double restricted_log_partition_function(const Graph& g, const PartIndex& index, const GroundState& psi,
                                                const VertexSet& u, int q, double beta) {
  check_ground_state(psi, index, q);
  return restricted_log_partition_function(g, ground_state_colouring(index, psi), u, q, beta);
}

/// log w_γ = -β|∇γ| + log R^ψ(γ), evaluated without cancellation at large β.
inline double polymer_log_weight(const Graph& g, std::span<const int> boundary, const VertexSet& gamma, int q,
                                 double beta) {
  const auto hist = restricted_histogram(g, boundary, gamma, q);
  const double closure = static_cast<double>(hist.size() - 1);
  std::vector<double> terms;
  for (std::size_t c = 0; c < hist.size(); ++c)
    if (hist[c] != 0)
      terms.push_back(std::log(static_cast<double>(hist[c])) + beta * (static_cast<double>(c) - closure));
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  return log_sum_exp(terms);
}

inline double polymer_log_weight(const Graph& g, const PartIndex& index, const GroundState& psi,
                                 const VertexSet& gamma, int q, double beta) {
  check_ground_state(psi, index, q);
  return polymer_log_weight(g, ground_state_colouring(index, psi), gamma, q, beta);
}

/// a = 3 - βα + log(q-1) + log Δ.
inline double kp_exponent(int q, std::size_t max_degree, double alpha, double beta) {
  if (!(alpha > 0)) throw PreconditionError("alpha must be positive");
  if (q < 2) throw PreconditionError("q must be at least 2");
  return 3.0 - beta * alpha + std::log(static_cast<double>(q - 1)) + std::log(static_cast<double>(max_degree));
}

/// a ≤ -log(Δ+2), which implies the Kotecký–Preiss condition with g(γ) = |γ|.
inline bool kp_verified(int q, std::size_t max_degree, double alpha, double beta) {
  return kp_exponent(q, max_degree, alpha, beta) <= -std::log(static_cast<double>(max_degree) + 2.0);
}

struct Polymer {
  VertexSet vertices;
  Mask mask = 0;
  std::int64_t closure_size = 0;

  std::size_t size() const { return vertices.size(); }
};

/// Every connected small set of at most max_size vertices, in lexicographic
/// order of sorted vertex lists.
inline std::vector<Polymer> enumerate_polymers(const Graph& g, const PartIndex& index, std::size_t max_size,
                                               std::size_t budget = kPolymerCountBudget) {
  require_mask_graph(g);
  if (index.n != g.num_vertices()) throw PreconditionError("partition is for a different vertex count");
  if (max_size > kPolymerSizeCap)
    throw BudgetError("polymer size limited to " + std::to_string(kPolymerSizeCap));
  std::vector<Polymer> out;
  if (max_size == 0) return out;
  const std::size_t n = g.num_vertices();
  std::vector<Mask> nbr(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (Vertex w : g.neighbors(static_cast<Vertex>(v))) nbr[v] |= Mask{1} << w;

  std::vector<std::size_t> hits(index.count(), 0);
  std::vector<Mask> found;
  auto fits = [&](int v) { return 2 * (hits[index.part_of[v]] + 1) <= index.part_size(index.part_of[v]); };

  // Extension-set enumeration: each connected set is produced once, from its minimum vertex.
  auto extend = [&](auto&& self, Mask sub, Mask ext, Mask closed, int root, std::size_t size) -> void {
    found.push_back(sub);
    if (found.size() > budget) throw BudgetError("polymer count exceeds budget " + std::to_string(budget));
    if (size == max_size) return;
    while (ext != 0) {
      const int w = std::countr_zero(ext);
      ext &= ext - 1;
      if (!fits(w)) continue;
      const Mask above = root == 63 ? 0 : ~((Mask{2} << root) - 1);
      const Mask fresh = nbr[w] & ~closed & above;
      ++hits[index.part_of[w]];
      self(self, sub | (Mask{1} << w), ext | fresh, closed | nbr[w], root, size + 1);
      --hits[index.part_of[w]];
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (!fits(static_cast<int>(v))) continue;
    const Mask above = v == 63 ? 0 : ~((Mask{2} << v) - 1);
    ++hits[index.part_of[v]];
    extend(extend, Mask{1} << v, nbr[v] & above, nbr[v] | (Mask{1} << v), static_cast<int>(v), 1);
    --hits[index.part_of[v]];
  }

  out.reserve(found.size());
  for (Mask m : found) {
    Polymer p;
    p.vertices = VertexSet::from_bits(m);
    p.mask = m;
    p.closure_size = closure_size(g, p.vertices);
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const Polymer& a, const Polymer& b) { return a.vertices < b.vertices; });
  return out;
}

}  // namespace ssepotts
