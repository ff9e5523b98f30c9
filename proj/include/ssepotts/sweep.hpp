#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "rational.hpp"
#include "spectrum.hpp"

namespace ssepotts {

struct SweepCut {
  VertexSet set;          // vol(set) <= vol(V)/2
  Rational conductance;   // φ(set)
};

/// Cheeger sweep over the D^{-1/2}-scaled second eigenvector: vertices are
/// ordered by scaled value (index breaks ties) and the prefix or suffix cut of
/// least conductance with volume at most half is returned. Guarantees
/// φ(S) ≤ sqrt(2 λ₂).
inline SweepCut sweep_cut(const Graph& g, const Spectrum& spectrum) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw PreconditionError("sweep cut needs at least two vertices");
  if (spectrum.n != n) throw PreconditionError("spectrum does not match graph");
  const auto fiedler = spectrum.vector(1);
  std::vector<double> x(n);
  for (std::size_t v = 0; v < n; ++v)
    x[v] = fiedler[v] / std::sqrt(static_cast<double>(g.degree(static_cast<Vertex>(v))));
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return x[a] < x[b]; });

  const std::int64_t total = total_volume(g);
  std::vector<std::uint8_t> in_prefix(n, 0);
  std::int64_t boundary = 0, vol = 0;
  bool found = false;
  Rational best;
  std::size_t best_len = 0;
  bool best_is_prefix = true;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const Vertex u = order[j];
    boundary += g.degree(u) - 2 * degree_into(g, u, in_prefix);
    in_prefix[u] = 1;
    vol += g.degree(u);
    const bool prefix = 2 * vol <= total;
    const std::int64_t side = prefix ? vol : total - vol;
    if (side == 0) continue;
    const Rational phi(boundary, side);
    if (!found || phi < best) {
      found = true;
      best = phi;
      best_len = j + 1;
      best_is_prefix = prefix;
    }
  }
  if (!found) throw PreconditionError("sweep cut: no proper cut with positive volume");
  std::vector<Vertex> ids;
  if (best_is_prefix) {
    ids.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_len));
  } else {
    ids.assign(order.begin() + static_cast<std::ptrdiff_t>(best_len), order.end());
  }
  return {VertexSet(std::move(ids)), best};
}

inline SweepCut sweep_cut(const Graph& g) { return sweep_cut(g, normalized_laplacian_spectrum(g)); }

/// φ(B \ {u}) from the closed form
///   vol(B)/(vol(B)-d_V) · φ(B) - (d_V - 2 d_B)/(vol(B) - d_V),
/// with d_V = deg_G(u) and d_B = deg_{G[B]}(u). Requires u ∈ B and vol(B) > d_V.
inline Rational phi_after_vertex_removal(const Graph& g, const VertexSet& b, Vertex u) {
  if (!b.contains(u)) throw PreconditionError("vertex not in set");
  const std::int64_t vol_b = volume(g, b);
  const std::int64_t d_v = g.degree(u);
  if (vol_b <= d_v) throw PreconditionError("requires vol(B) > deg(u)");
  const auto in_b = b.mask(g.num_vertices());
  const std::int64_t d_b = degree_into(g, u, in_b);
  const Rational phi_b = conductance(g, b);
  const Rational rest(vol_b - d_v);
  return Rational(vol_b) / rest * phi_b - Rational(d_v - 2 * d_b) / rest;
}

}  // namespace ssepotts
