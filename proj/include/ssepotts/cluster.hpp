#pragma once

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "ground_state.hpp"
#include "logmath.hpp"
#include "parallel.hpp"
#include "polymer.hpp"

namespace ssepotts {

inline constexpr std::uint64_t kClusterBudget = 500'000'000;

/// Σ over connected spanning edge subsets A of H of (-1)^{|A|}, for a graph on
/// k ≤ 20 vertices given by adjacency bitmasks.
inline std::int64_t connected_spanning_sum(int k, const std::vector<std::uint32_t>& adj) {
  if (k <= 0) return 0;
  if (k > 20) throw BudgetError("Ursell coefficient limited to 20 polymers");
  const std::uint32_t full = (k == 32) ? ~0U : ((1U << k) - 1);
  auto independent = [&](std::uint32_t s) {
    for (std::uint32_t r = s; r != 0; r &= r - 1)
      if (adj[std::countr_zero(r)] & s) return false;
    return true;
  };
  // c(S) for S ∋ 0, via g(S) = Σ_{0 ∈ T ⊆ S} c(T)·g(S∖T) with g(S) = [S independent].
  std::vector<std::int64_t> c(std::size_t{1} << k, 0);
  for (std::uint32_t s = 1; s <= full; s += 2) {
    std::int64_t value = independent(s) ? 1 : 0;
    const std::uint32_t rest = s & ~1U;
    for (std::uint32_t sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
      const std::uint32_t t = sub | 1U;
      if (t != s && c[t] != 0 && independent(s & ~t)) value -= c[t];
      if (sub == 0) break;
    }
    c[s] = value;
    if (s == full) break;
  }
  return c[full];
}

/// Polymers plus their closed neighbourhoods; γ' is incompatible with γ iff
/// γ' meets N[γ].
struct PolymerSystem {
  std::vector<Polymer> polymers;
  std::vector<Mask> blocked;

  PolymerSystem() = default;
  PolymerSystem(const Graph& g, std::vector<Polymer> ps) : polymers(std::move(ps)) {
    blocked.reserve(polymers.size());
    for (const auto& p : polymers) blocked.push_back(closed_neighbourhood(g, p.mask));
  }
  std::size_t size() const { return polymers.size(); }
  bool incompatible(std::size_t i, std::size_t j) const { return (polymers[j].mask & blocked[i]) != 0; }
};

/// Linear weights, row-major: one row per ground state, one column per polymer.
struct WeightTable {
  std::size_t states = 0;
  std::size_t polymers = 0;
  std::vector<double> w;

  double at(std::size_t s, std::size_t p) const { return w[s * polymers + p]; }
};

inline WeightTable polymer_weights(const Graph& g, const PartIndex& index, const std::vector<GroundState>& states,
                                   const PolymerSystem& sys, int q, double beta, int threads) {
  WeightTable t;
  t.states = states.size();
  t.polymers = sys.size();
  t.w.assign(t.states * t.polymers, 0.0);
  std::vector<std::vector<int>> colourings;
  colourings.reserve(states.size());
  for (const auto& psi : states) {
    check_ground_state(psi, index, q);
    colourings.push_back(ground_state_colouring(index, psi));
  }
  parallel_for(sys.size(), threads, [&](std::size_t p) {
    for (std::size_t s = 0; s < t.states; ++s)
      t.w[s * t.polymers + p] = std::exp(polymer_log_weight(g, colourings[s], sys.polymers[p].vertices, q, beta));
  });
  return t;
}

struct ClusterSums {
  std::vector<double> values;  // one per ground state
  std::uint64_t terms = 0;     // clusters (Ursell) or compatible families (series) visited
};

namespace detail {

inline void charge_budget(std::atomic<std::uint64_t>& used, std::uint64_t amount, std::uint64_t budget) {
  if (used.fetch_add(amount) + amount > budget)
    throw BudgetError("cluster enumeration exceeds budget " + std::to_string(budget));
}

}  // namespace detail

/// a_j = Σ over compatible families of total size j of Π w_γ, for j ≤ depth.
/// Row-major: states × (depth + 1).
inline std::vector<double> family_size_sums(const PolymerSystem& sys, const WeightTable& wt, int depth, int threads,
                                            std::uint64_t& families, std::uint64_t budget = kClusterBudget) {
  const std::size_t S = wt.states, P = sys.size(), D = static_cast<std::size_t>(depth) + 1;
  std::vector<std::vector<double>> per_root(P);
  std::vector<std::uint64_t> root_count(P, 0);
  std::atomic<std::uint64_t> used{0};

  parallel_for(P, threads, [&](std::size_t r) {
    if (sys.polymers[r].size() > static_cast<std::size_t>(depth)) return;
    auto& acc = per_root[r];
    acc.assign(S * D, 0.0);
    std::vector<double> prod((static_cast<std::size_t>(depth) + 1) * S, 0.0);
    std::uint64_t local = 0;
    auto rec = [&](auto&& self, std::size_t last, Mask blocked, std::size_t total, std::size_t level) -> void {
      const double* row = &prod[level * S];
      for (std::size_t s = 0; s < S; ++s) acc[s * D + total] += row[s];
      if (++local % 65536 == 0) detail::charge_budget(used, 65536, budget);
      for (std::size_t j = last + 1; j < P; ++j) {
        const std::size_t size = sys.polymers[j].size();
        if (total + size > static_cast<std::size_t>(depth) || (sys.polymers[j].mask & blocked)) continue;
        double* next = &prod[(level + 1) * S];
        bool any = false;
        for (std::size_t s = 0; s < S; ++s) {
          next[s] = row[s] * wt.at(s, j);
          any = any || next[s] != 0.0;
        }
        if (!any) continue;
        self(self, j, blocked | sys.blocked[j], total + size, level + 1);
      }
    };
    bool any = false;
    for (std::size_t s = 0; s < S; ++s) {
      prod[s] = wt.at(s, r);
      any = any || prod[s] != 0.0;
    }
    if (any) rec(rec, r, sys.blocked[r], sys.polymers[r].size(), 0);
    root_count[r] = local;
  });

  std::vector<double> a(S * D, 0.0);
  for (std::size_t s = 0; s < S; ++s) a[s * D] = 1.0;
  families = 0;
  for (std::size_t r = 0; r < P; ++r) {
    families += root_count[r];
    if (per_root[r].empty()) continue;
    for (std::size_t i = 0; i < S * D; ++i) a[i] += per_root[r][i];
  }
  return a;
}

/// Σ_{j=1}^{depth} b_j where log(Σ_j a_j z^j) = Σ_j b_j z^j, a_0 = 1.
inline double truncated_log_series(std::span<const double> a, int depth) {
  std::vector<double> b(static_cast<std::size_t>(depth) + 1, 0.0);
  double total = 0;
  for (int j = 1; j <= depth; ++j) {
    double v = a[j];
    for (int i = 1; i < j; ++i) v -= static_cast<double>(i) * b[i] * a[j - i] / static_cast<double>(j);
    b[j] = v;
    total += v;
  }
  return total;
}

/// Truncated cluster expansion by grading compatible families by total size.
inline ClusterSums series_cluster_sums(const PolymerSystem& sys, const WeightTable& wt, int depth, int threads,
                                       std::uint64_t budget = kClusterBudget) {
  ClusterSums out;
  out.values.assign(wt.states, 0.0);
  if (depth <= 0) return out;
  const auto a = family_size_sums(sys, wt, depth, threads, out.terms, budget);
  const std::size_t D = static_cast<std::size_t>(depth) + 1;
  for (std::size_t s = 0; s < wt.states; ++s)
    out.values[s] = truncated_log_series(std::span<const double>(a).subspan(s * D, D), depth);
  return out;
}

/// Truncated cluster expansion by explicit enumeration of clusters as
/// multisets in canonical polymer order, each weighted by its Ursell coefficient.
inline ClusterSums ursell_cluster_sums(const PolymerSystem& sys, const WeightTable& wt, int depth, int threads,
                                       std::uint64_t budget = kClusterBudget) {
  const std::size_t S = wt.states, P = sys.size();
  ClusterSums out;
  out.values.assign(S, 0.0);
  if (depth <= 0) return out;
  std::vector<std::vector<double>> per_root(P);
  std::vector<std::uint64_t> root_count(P, 0);
  std::atomic<std::uint64_t> used{0};

  parallel_for(P, threads, [&](std::size_t r) {
    if (sys.polymers[r].size() > static_cast<std::size_t>(depth)) return;
    auto& acc = per_root[r];
    acc.assign(S, 0.0);
    const std::size_t D = static_cast<std::size_t>(depth);
    std::vector<std::size_t> seq;
    std::vector<std::uint32_t> adj;
    std::vector<double> prod((D + 1) * S, 0.0);
    std::unordered_map<std::uint64_t, std::int64_t> cache;
    std::uint64_t local = 0, nodes = 0;

    auto component_count = [&] {
      const int k = static_cast<int>(seq.size());
      std::uint32_t seen = 0;
      int comps = 0;
      for (int v = 0; v < k; ++v) {
        if (seen >> v & 1U) continue;
        ++comps;
        std::uint32_t frontier = 1U << v;
        seen |= frontier;
        while (frontier) {
          const int x = std::countr_zero(frontier);
          frontier &= frontier - 1;
          const std::uint32_t fresh = adj[x] & ~seen;
          seen |= fresh;
          frontier |= fresh;
        }
      }
      return comps;
    };
    auto coefficient = [&]() -> double {
      const int k = static_cast<int>(seq.size());
      std::int64_t phi;
      if (k <= 11) {
        std::uint64_t key = static_cast<std::uint64_t>(k);
        int bit = 4;
        for (int i = 0; i < k; ++i)
          for (int j = i + 1; j < k; ++j, ++bit)
            if (adj[i] >> j & 1U) key |= std::uint64_t{1} << bit;
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, connected_spanning_sum(k, adj)).first;
        phi = it->second;
      } else {
        phi = connected_spanning_sum(k, adj);
      }
      double denom = 1;
      std::size_t run = 1;
      for (std::size_t i = 1; i < seq.size(); ++i) {
        run = seq[i] == seq[i - 1] ? run + 1 : 1;
        denom *= static_cast<double>(run);
      }
      return static_cast<double>(phi) / denom;
    };
    auto push = [&](std::size_t j) {
      std::uint32_t row = 0;
      const std::size_t k = seq.size();
      for (std::size_t i = 0; i < k; ++i)
        if (sys.incompatible(seq[i], j)) {
          row |= 1U << i;
          adj[i] |= 1U << k;
        }
      seq.push_back(j);
      adj.push_back(row);
    };
    auto pop = [&] {
      seq.pop_back();
      adj.pop_back();
      const std::uint32_t keep = (1U << seq.size()) - 1;
      for (auto& a : adj) a &= keep;
    };

    auto rec = [&](auto&& self, std::size_t total) -> void {
      const std::size_t level = seq.size() - 1;
      const double* row = &prod[level * S];
      const int comps = component_count();
      if (comps == 1) {
        const double coef = coefficient();
        for (std::size_t s = 0; s < S; ++s) acc[s] += coef * row[s];
        ++local;
      }
      if (++nodes % 65536 == 0) detail::charge_budget(used, 65536, budget);
      for (std::size_t j = seq.back(); j < P; ++j) {
        const std::size_t size = sys.polymers[j].size();
        if (total + size > D) continue;
        push(j);
        const int after = component_count();
        if (after == 1 || total + size < D) {
          double* next = &prod[(level + 1) * S];
          bool any = false;
          for (std::size_t s = 0; s < S; ++s) {
            next[s] = row[s] * wt.at(s, j);
            any = any || next[s] != 0.0;
          }
          if (any) self(self, total + size);
        }
        pop();
      }
    };
    bool any = false;
    for (std::size_t s = 0; s < S; ++s) {
      prod[s] = wt.at(s, r);
      any = any || prod[s] != 0.0;
    }
    if (!any) return;
    push(r);
    rec(rec, sys.polymers[r].size());
    root_count[r] = local;
  });

  for (std::size_t r = 0; r < P; ++r) {
    out.terms += root_count[r];
    if (per_root[r].empty()) continue;
    for (std::size_t s = 0; s < S; ++s) out.values[s] += per_root[r][s];
  }
  return out;
}

enum class ClusterMethod { Series, Ursell };

struct ClusterOptions {
  ClusterMethod method = ClusterMethod::Series;
  int threads = 1;
  std::size_t polymer_budget = kPolymerCountBudget;
  std::uint64_t cluster_budget = kClusterBudget;
};

struct XiBatch {
  std::vector<double> log_xi;  // one per ground state
  int depth = 0;
  std::size_t polymers = 0;
  std::uint64_t clusters = 0;
  bool negligible = false;  // every weight below double range; log Ξ̂ = 0
};

/// ⌈log(2n/ζ)⌉: the tail of clusters beyond this size is at most ζ/2.
inline int truncation_depth(std::size_t n, double zeta) {
  if (!(zeta > 0)) throw PreconditionError("approximation parameter must be positive");
  return std::max(1, static_cast<int>(std::ceil(std::log(2.0 * static_cast<double>(n) / zeta))));
}

inline std::size_t largest_small_set(const PartIndex& index) {
  std::size_t total = 0;
  for (const auto& p : index.parts) total += p.size() / 2;
  return total;
}

/// Cluster expansion of log Ξ^ψ truncated at total size `depth`, without any
/// convergence check.
inline XiBatch cluster_expansion(const Graph& g, const PartIndex& index, const std::vector<GroundState>& states,
                                 int q, double beta, int depth, const ClusterOptions& opt = {}) {
  XiBatch out;
  out.depth = depth;
  out.log_xi.assign(states.size(), 0.0);
  const std::size_t max_size = std::min<std::size_t>(static_cast<std::size_t>(std::max(depth, 0)), largest_small_set(index));
  if (max_size == 0) return out;
  PolymerSystem sys(g, enumerate_polymers(g, index, max_size, opt.polymer_budget));
  out.polymers = sys.size();
  if (sys.size() == 0) return out;
  const WeightTable wt = polymer_weights(g, index, states, sys, q, beta, opt.threads);
  const ClusterSums sums = opt.method == ClusterMethod::Series
                               ? series_cluster_sums(sys, wt, depth, opt.threads, opt.cluster_budget)
                               : ursell_cluster_sums(sys, wt, depth, opt.threads, opt.cluster_budget);
  out.log_xi = sums.values;
  out.clusters = sums.terms;
  return out;
}

/// Truncated cluster expansion for every ground state in `states`, each a
/// relative ζ-approximation of Ξ^ψ. Refuses unless the convergence check passes
/// for the expansion constant α.
inline XiBatch truncated_log_xi_batch(const Graph& g, const PartIndex& index, const std::vector<GroundState>& states,
                                      int q, double beta, double zeta, double alpha, const ClusterOptions& opt = {}) {
  const std::size_t delta = g.max_degree();
  if (!kp_verified(q, delta, alpha, beta)) {
    const double need = (3.0 + std::log(q - 1.0) + std::log(static_cast<double>(delta)) +
                         std::log(static_cast<double>(delta) + 2.0)) / alpha;
    throw PreconditionError("Kotecky-Preiss check fails at beta=" + std::to_string(beta) +
                            "; requires beta >= " + std::to_string(need));
  }
  const int depth = truncation_depth(g.num_vertices(), zeta);
  // log Ξ ≤ Σ_γ w_γ ≤ n Σ_t r^t with r = eΔ(q-1)e^{-βα}.
  const double log_r = 1.0 + std::log(static_cast<double>(std::max<std::size_t>(delta, 1))) +
                       std::log(q - 1.0) - beta * alpha;
  if (log_r < 0) {
    const double log_bound = std::log(static_cast<double>(g.num_vertices())) + log_r - std::log1p(-std::exp(log_r));
    if (log_bound < -745.0) {
      XiBatch out;
      out.depth = depth;
      out.log_xi.assign(states.size(), 0.0);
      out.negligible = true;
      return out;
    }
  }
  return cluster_expansion(g, index, states, q, beta, depth, opt);
}

inline LogApprox truncated_log_xi(const Graph& g, const PartIndex& index, const GroundState& psi, int q, double beta,
                                  double xi, double alpha, const ClusterOptions& opt = {}) {
  const XiBatch b = truncated_log_xi_batch(g, index, {psi}, q, beta, xi, alpha, opt);
  return {b.log_xi[0], xi};
}

}  // namespace ssepotts
