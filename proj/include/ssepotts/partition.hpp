#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "exact_conductance.hpp"
#include "graph.hpp"
#include "rational.hpp"
#include "spectrum.hpp"
#include "sweep.hpp"

namespace ssepotts {

inline constexpr double kZeroEigenvalueTol = 1e-10;

struct PartitionParams {
  int k = 2;
  double C = 1.0;  // universal constant of the subgraph-λ₂ lemma; unknown, so configurable
  bool check_invariants = true;
  std::size_t brute_force_limit = 20;  // exact inner conductance for parts up to this size
};

struct PartitionConstants {
  double lambda_k = 0;
  double lambda_k_minus_1 = 0;
  double rho_star = 0;
  double phi_in = 0;
  double phi_out = 0;
  double tau = 0;
};

/// ρ*, φ_in, φ_out and τ from the spectrum of the input graph. Eigenvalues
/// within 1e-10 of zero are treated as zero.
inline PartitionConstants partition_constants(const std::vector<double>& lambda, int k, double C) {
  if (k < 2) throw PreconditionError("k must be at least 2");
  if (static_cast<std::size_t>(k) > lambda.size()) throw PreconditionError("k exceeds the number of vertices");
  if (!(C > 0)) throw PreconditionError("C must be positive");
  auto snap = [](double x) { return std::abs(x) <= kZeroEigenvalueTol ? 0.0 : std::max(0.0, x); };
  PartitionConstants c;
  c.lambda_k = snap(lambda[k - 1]);
  c.lambda_k_minus_1 = snap(lambda[k - 2]);
  if (c.lambda_k <= 0)
    throw PreconditionError("lambda_" + std::to_string(k) + " = 0; the partitioning needs lambda_k > 0");
  const double kd = k;
  const double root = std::sqrt(c.lambda_k_minus_1);
  c.rho_star = std::min(c.lambda_k / 10.0, 30.0 * C * std::pow(kd, 5) * root);
  c.phi_in = c.lambda_k / (140.0 * kd * kd);
  c.phi_out = 90.0 * C * std::pow(kd, 6) * root;
  c.tau = 1.0 / (5.0 * (kd - 1.0));
  return c;
}

struct PartCertificate {
  std::size_t size = 0;
  std::optional<Rational> sweep_conductance;  // φ_{G[P]}(S) for the sweep cut S of G[P]
  std::optional<double> lambda2;              // λ₂(G[P])
  std::optional<Rational> exact_inner_conductance;  // φ(G[P]) by enumeration, small parts only
  Rational outer_conductance;                 // φ_G(P)
  Rational min_degree_ratio;                  // min over v ∈ P of deg_{G[P]}(v) / deg_G(v)
  bool inner_ok = false;   // sweep conductance ≥ φ_in, hence φ(G[P]) ≥ φ_in²/4
  bool outer_ok = false;   // φ_G(P) ≤ φ_out
  bool degree_ok = false;  // ratio ≥ τ

  /// Certified lower bound on φ(G[P]) from the sweep: φ(G[P]) ≥ λ₂/2 ≥ φ_sweep²/4.
  double inner_lower_bound() const {
    if (!sweep_conductance) return 0.0;
    const double s = sweep_conductance->to_double();
    return s * s / 4.0;
  }
};

struct PartitionReport {
  std::vector<PartCertificate> parts;
  bool ell_ok = false;  // ℓ < k
  bool covers = false;  // parts partition V
  bool ok() const {
    if (!ell_ok || !covers) return false;
    for (const auto& p : parts)
      if (!p.inner_ok || !p.outer_ok || !p.degree_ok) return false;
    return true;
  }
};

struct IterationStats {
  std::int64_t main_loop = 0;
  std::int64_t split_core = 0;        // line 5
  std::int64_t replace_core = 0;      // line 9
  std::int64_t split_periphery = 0;   // line 12
  std::int64_t merge_periphery = 0;   // line 14
  std::int64_t move_sweep_part = 0;   // line 16
  std::int64_t attraction_merge = 0;  // while-condition merge test fired without a sparse cut
  std::int64_t core_removals = 0;     // repair loop (a)
  std::int64_t vertex_moves = 0;      // repair loop (b)
  std::int64_t sweeps_computed = 0;
  std::int64_t budget = 0;
};

struct ExpanderPartition {
  int k = 2;
  double C = 1.0;
  std::vector<double> lambda;
  PartitionConstants constants;
  std::vector<VertexSet> parts;
  std::vector<VertexSet> cores;
  PartitionReport report;
  IterationStats iterations;

  std::size_t ell() const { return parts.size(); }
};

namespace detail {

struct SweepInfo {
  VertexSet cut;        // global ids
  Rational phi_cut;     // φ_{G[P]}(cut)
  Rational phi_rest;    // φ_{G[P]}(P \ cut)
  double lambda2 = 0;
};

inline SweepInfo sweep_part(const Graph& g, const VertexSet& part) {
  const auto sub = induced_subgraph(g, part, true);
  if (sub.graph.has_isolated_vertex())
    throw std::logic_error("part induces an isolated vertex at a loop check");
  const Spectrum spec = normalized_laplacian_spectrum(sub.graph);
  const SweepCut cut = sweep_cut(sub.graph, spec);
  std::vector<Vertex> ids;
  for (Vertex v : cut.set) ids.push_back(sub.to_parent[v]);
  const VertexSet rest_local = cut.set.complement(sub.graph.num_vertices());
  SweepInfo info{VertexSet(std::move(ids)), cut.conductance, conductance(sub.graph, rest_local),
                 spec.values[1]};
  return info;
}

}  // namespace detail

/// Certificates for an arbitrary partition of V against the given constants.
inline PartitionReport verify_partition(const Graph& g, const std::vector<VertexSet>& parts,
                                        const PartitionConstants& c, int k, std::size_t brute_force_limit = 20) {
  const std::size_t n = g.num_vertices();
  PartitionReport rep;
  std::vector<int> seen(n, 0);
  for (const auto& p : parts) {
    p.check_range(n);
    for (Vertex v : p) ++seen[v];
  }
  rep.covers = std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
  if (!rep.covers) throw PreconditionError("verify_partition: sets do not partition V");
  rep.ell_ok = parts.size() < static_cast<std::size_t>(k);

  for (const auto& p : parts) {
    PartCertificate cert;
    cert.size = p.size();
    if (p.empty()) throw PreconditionError("verify_partition: empty part");
    cert.outer_conductance = conductance(g, p);
    cert.outer_ok = cert.outer_conductance.at_most(c.phi_out);
    const auto mask = p.mask(n);
    bool first = true;
    for (Vertex v : p) {
      const Rational r(degree_into(g, v, mask), g.degree(v));
      if (first || r < cert.min_degree_ratio) cert.min_degree_ratio = r;
      first = false;
    }
    cert.degree_ok = !cert.min_degree_ratio.less_than(c.tau);
    const auto sub = induced_subgraph(g, p, true);
    if (p.size() >= 2 && !sub.graph.has_isolated_vertex()) {
      const auto info = detail::sweep_part(g, p);
      cert.sweep_conductance = info.phi_cut;
      cert.lambda2 = info.lambda2;
      cert.inner_ok = !info.phi_cut.less_than(c.phi_in);
      if (p.size() <= brute_force_limit) cert.exact_inner_conductance = min_conductance(sub.graph).value;
    }
    rep.parts.push_back(cert);
  }
  return rep;
}

/// Partitions V into ℓ < k parts whose induced subgraphs are expanders, with
/// every vertex keeping at least a τ fraction of its degree inside its part.
///
/// Follows the sweep-driven refinement loop: each iteration picks the lowest
/// part i whose sweep cut in G[P_i] is sparser than φ_in (or whose periphery
/// P_i \ B_i is attracted elsewhere) and splits the core, replaces it, splits
/// off periphery, or merges periphery, then runs the two repair loops.
inline ExpanderPartition partition_into_expanders(const Graph& g, const PartitionParams& params) {
  const std::size_t n = g.num_vertices();
  if (g.has_isolated_vertex()) throw PreconditionError("graph has an isolated vertex");
  const Spectrum spectrum = normalized_laplacian_spectrum(g);

  ExpanderPartition out;
  out.k = params.k;
  out.C = params.C;
  out.lambda = spectrum.values;
  out.constants = partition_constants(spectrum.values, params.k, params.C);
  const PartitionConstants& c = out.constants;
  const int k = params.k;
  const auto m = static_cast<std::int64_t>(g.num_edges());
  auto& stats = out.iterations;
  stats.budget = 10LL * k * static_cast<std::int64_t>(n) * m;

  std::vector<int> part_of(n, 0);
  std::vector<std::uint8_t> in_core(n, 1);
  int ell = 1;
  auto threshold = [&](int l) { return c.rho_star * std::pow(1.0 + 1.0 / k, l); };

  auto part_set = [&](int i) {
    std::vector<Vertex> ids;
    for (std::size_t v = 0; v < n; ++v)
      if (part_of[v] == i) ids.push_back(static_cast<Vertex>(v));
    return VertexSet(std::move(ids));
  };
  auto core_set = [&](int i) {
    std::vector<Vertex> ids;
    for (std::size_t v = 0; v < n; ++v)
      if (part_of[v] == i && in_core[v]) ids.push_back(static_cast<Vertex>(v));
    return VertexSet(std::move(ids));
  };
  // e(X, ·) against every part, or against every core.
  auto edges_to_parts = [&](const VertexSet& x, bool cores_only) {
    std::vector<std::int64_t> counts(ell, 0);
    const auto in_x = x.mask(n);
    for (Vertex u : x)
      for (Vertex w : g.neighbors(u))
        if (!in_x[w] && (!cores_only || in_core[w])) ++counts[part_of[w]];
    return counts;
  };
  auto cross_edges = [&] {
    std::int64_t count = 0;
    for (const Edge& e : g.edges()) count += part_of[e.u] != part_of[e.v];
    return count;
  };
  // φ(S, B) = e(S,B) vol(B) / (vol(B \ S) e(S, V \ B)); nullopt stands for +∞.
  auto relative_conductance = [&](const VertexSet& s, const VertexSet& b) -> std::optional<Rational> {
    const std::int64_t inside = edges_between(g, s, b);
    const std::int64_t outside = edges_between(g, s, b.complement(n));
    const std::int64_t rest = volume(g, b.minus(s));
    if (outside == 0 || rest == 0) return std::nullopt;
    return Rational(inside) * Rational(volume(g, b)) / (Rational(rest) * Rational(outside));
  };

  std::map<std::vector<Vertex>, detail::SweepInfo> sweep_cache;
  auto sweep_of = [&](const VertexSet& part) -> const detail::SweepInfo& {
    auto it = sweep_cache.find(part.ids());
    if (it == sweep_cache.end()) {
      ++stats.sweeps_computed;
      it = sweep_cache.emplace(part.ids(), detail::sweep_part(g, part)).first;
    }
    return it->second;
  };

  std::int64_t periphery_moves_since_core_change = 0;

  auto check_loop_invariants = [&] {
    if (ell >= k) throw std::logic_error("partition: number of parts reached k");
    if (!params.check_invariants) return;
    const double bound = threshold(ell);
    for (int i = 0; i < ell; ++i) {
      const VertexSet b = core_set(i);
      if (b.empty()) throw std::logic_error("partition: empty core");
      if (!conductance(g, b).at_most(bound)) throw std::logic_error("partition: core conductance bound violated");
    }
    if (stats.split_core + stats.split_periphery > k - 1)
      throw std::logic_error("partition: more than k-1 splits");
    if (stats.replace_core > static_cast<std::int64_t>(n)) throw std::logic_error("partition: too many core replacements");
    if (periphery_moves_since_core_change > m) throw std::logic_error("partition: too many periphery moves");
  };

  auto repair = [&] {
    // (a) drop core vertices keeping less than a fifth of their degree in the core.
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t v = 0; v < n; ++v) {
        if (!in_core[v]) continue;
        const int i = part_of[v];
        std::int64_t inside = 0;
        for (Vertex w : g.neighbors(static_cast<Vertex>(v))) inside += part_of[w] == i && in_core[w];
        const std::int64_t deg = g.degree(static_cast<Vertex>(v));
        if (5 * inside >= deg) continue;
        if (params.check_invariants) {
          const VertexSet b = core_set(i);
          if (b.size() < 2 || phi_after_vertex_removal(g, b, static_cast<Vertex>(v)) > conductance(g, b))
            throw std::logic_error("partition: core repair increased conductance");
        }
        in_core[v] = 0;
        ++stats.core_removals;
        periphery_moves_since_core_change = 0;
        changed = true;
      }
    }
    // (b) move periphery vertices to the part holding most of their neighbours.
    std::int64_t cross = params.check_invariants ? cross_edges() : 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t v = 0; v < n; ++v) {
        if (in_core[v]) continue;
        const int i = part_of[v];
        std::vector<std::int64_t> counts(ell, 0);
        for (Vertex w : g.neighbors(static_cast<Vertex>(v))) ++counts[part_of[w]];
        int best = -1;
        for (int j = 0; j < ell; ++j)
          if (j != i && (best < 0 || counts[j] > counts[best])) best = j;
        if (best < 0 || counts[i] >= counts[best]) continue;
        part_of[v] = best;
        ++stats.vertex_moves;
        changed = true;
        if (params.check_invariants) {
          const std::int64_t now = cross_edges();
          if (now >= cross) throw std::logic_error("partition: vertex move did not reduce cross edges");
          cross = now;
        }
      }
    }
  };

  while (true) {
    check_loop_invariants();

    // Lowest i satisfying the loop condition.
    int chosen = -1;
    std::optional<VertexSet> cut;
    for (int i = 0; i < ell && chosen < 0; ++i) {
      const VertexSet p = part_set(i);
      const VertexSet b = core_set(i);
      if (p.size() >= 2) {
        const auto& info = sweep_of(p);
        if (std::max(info.phi_cut, info.phi_rest).less_than(c.phi_in)) {
          chosen = i;
          cut = info.cut;
          break;
        }
      }
      const VertexSet x = p.minus(b);
      if (!x.empty()) {
        const auto to_parts = edges_to_parts(x, false);
        for (int j = 0; j < ell; ++j)
          if (j != i && to_parts[i] < to_parts[j]) chosen = i;
      }
    }
    if (chosen < 0) break;

    if (++stats.main_loop > stats.budget) throw BudgetError("partition: iteration budget 10*k*n*m exceeded");
    const int i = chosen;
    const VertexSet p = part_set(i);
    const VertexSet b = core_set(i);

    if (!cut) {
      // Periphery is attracted to another part more than to its own core.
      const VertexSet x = p.minus(b);
      const auto to_parts = edges_to_parts(x, false);
      int best = -1;
      for (int j = 0; j < ell; ++j)
        if (j != i && (best < 0 || to_parts[j] > to_parts[best])) best = j;
      for (Vertex v : x) part_of[v] = best;
      ++stats.attraction_merge;
      ++periphery_moves_since_core_change;
      repair();
      continue;
    }

    VertexSet s = *cut;
    if (2 * volume(g, s.intersect(b)) > volume(g, b)) s = p.minus(s);
    const VertexSet s_b = s.intersect(b);
    const VertexSet sbar_b = b.minus(s);
    const VertexSet s_p = s.minus(b);
    const double thr = threshold(ell + 1);
    bool fired = false;

    if (!s_b.empty() && !sbar_b.empty() &&
        std::max(conductance(g, s_b), conductance(g, sbar_b)).at_most(thr)) {
      // Split the core: B_i = S_B, new part from the rest of the core.
      for (Vertex v : sbar_b) part_of[v] = ell;
      ++ell;
      ++stats.split_core;
      periphery_moves_since_core_change = 0;
      fired = true;
    }
    if (!fired && !s_b.empty() && !sbar_b.empty()) {
      const auto r1 = relative_conductance(s_b, b);
      const auto r2 = relative_conductance(sbar_b, b);
      const Rational limit(1, 3 * k);
      if (r1 && r2 && std::max(*r1, *r2) <= limit) {
        const VertexSet& keep = conductance(g, sbar_b) < conductance(g, s_b) ? sbar_b : s_b;
        const VertexSet& drop = &keep == &s_b ? sbar_b : s_b;
        for (Vertex v : drop) in_core[v] = 0;
        ++stats.replace_core;
        periphery_moves_since_core_change = 0;
        fired = true;
      }
    }
    if (!fired && !s_p.empty() && conductance(g, s_p).at_most(thr)) {
      for (Vertex v : s_p) {
        part_of[v] = ell;
        in_core[v] = 1;
      }
      ++ell;
      ++stats.split_periphery;
      periphery_moves_since_core_change = 0;
      fired = true;
    }
    if (!fired) {
      const VertexSet x = p.minus(b);
      if (!x.empty()) {
        const std::int64_t own = edges_between(g, x, p);
        const auto to_cores = edges_to_parts(x, true);
        int best = -1;
        for (int j = 0; j < ell; ++j)
          if (j != i && (best < 0 || to_cores[j] > to_cores[best])) best = j;
        if (best >= 0 && own < to_cores[best]) {
          for (Vertex v : x) part_of[v] = best;
          ++stats.merge_periphery;
          ++periphery_moves_since_core_change;
          fired = true;
        }
      }
    }
    if (!fired && !s_p.empty()) {
      const std::int64_t own = edges_between(g, s_p, p);
      const auto to_parts = edges_to_parts(s_p, false);
      int best = -1;
      for (int j = 0; j < ell; ++j)
        if (j != i && (best < 0 || to_parts[j] > to_parts[best])) best = j;
      if (best >= 0 && own < to_parts[best]) {
        for (Vertex v : s_p) part_of[v] = best;
        ++stats.move_sweep_part;
        ++periphery_moves_since_core_change;
        fired = true;
      }
    }
    if (!fired)
      throw std::runtime_error("partition: no refinement step applies; the constant C is too small for this graph");
    repair();
  }

  for (int i = 0; i < ell; ++i) {
    out.parts.push_back(part_set(i));
    out.cores.push_back(core_set(i));
  }
  out.report = verify_partition(g, out.parts, c, k, params.brute_force_limit);
  return out;
}

}  // namespace ssepotts
