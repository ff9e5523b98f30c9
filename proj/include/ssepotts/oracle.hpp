#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
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

inline constexpr std::uint64_t kOracleStateBudget = 100'000'000;

struct OracleOptions {
  int threads = 1;
  std::uint64_t state_budget = kOracleStateBudget;
  std::size_t polymer_budget = 1000;
  std::uint64_t family_budget = 10'000'000;
};

namespace detail {

inline std::uint64_t colouring_count(std::size_t n, int q, std::uint64_t budget) {
  if (q < 2) throw PreconditionError("q must be at least 2");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= static_cast<std::uint64_t>(q);
    if (total > budget) throw BudgetError("q^n exceeds the enumeration budget of " + std::to_string(budget));
  }
  return total;
}

/// Runs every colouring in [q]^V through per-chunk hooks, in mixed-radix order
/// with vertex 0 the fastest digit. A hook provides reset(colours),
/// change(v, from, to, colours) and visit(colours, mono). The top digits are
/// fixed per chunk; chunks run in parallel and are returned in order.
template <typename Hook, typename Factory>
std::vector<Hook> enumerate_colourings(const Graph& g, int q, const OracleOptions& opt, Factory make) {
  const std::size_t n = g.num_vertices();
  colouring_count(n, q, opt.state_budget);
  std::size_t top = 0;
  std::uint64_t chunks = 1;
  const std::uint64_t want = 4 * static_cast<std::uint64_t>(std::max(opt.threads, 1));
  while (top < n && chunks < want) {
    ++top;
    chunks *= static_cast<std::uint64_t>(q);
  }
  const std::size_t low = n - top;

  std::vector<Hook> hooks;
  hooks.reserve(chunks);
  for (std::uint64_t c = 0; c < chunks; ++c) hooks.push_back(make());

  parallel_for(chunks, opt.threads, [&](std::size_t c) {
    Hook& hook = hooks[c];
    std::vector<int> col(n, 0);
    std::uint64_t rest = c;
    for (std::size_t v = low; v < n; ++v) {
      col[v] = static_cast<int>(rest % static_cast<std::uint64_t>(q));
      rest /= static_cast<std::uint64_t>(q);
    }
    std::size_t mono = monochromatic_edges(g, col);
    hook.reset(col);
    auto set = [&](std::size_t v, int to) {
      const int from = col[v];
      for (Vertex w : g.neighbors(static_cast<Vertex>(v))) {
        if (col[w] == from) --mono;
        if (col[w] == to) ++mono;
      }
      col[v] = to;
      hook.change(v, from, to, col);
    };
    while (true) {
      hook.visit(col, mono);
      std::size_t i = 0;
      while (i < low && col[i] == q - 1) set(i++, 0);
      if (i == low) break;
      set(i, col[i] + 1);
    }
  });
  return hooks;
}

struct HistogramHook {
  std::vector<std::uint64_t> hist;
  void reset(const std::vector<int>&) {}
  void change(std::size_t, int, int, const std::vector<int>&) {}
  void visit(const std::vector<int>&, std::size_t mono) { ++hist[mono]; }
};

/// Tracks which ground state (if any) the current colouring is close to.
struct ClosenessHook {
  const PartIndex* index = nullptr;
  int q = 2;
  std::size_t edges = 0;
  std::vector<std::size_t> counts;  // part * q + colour
  std::vector<int> majority;        // strict-majority colour per part, or -1
  std::size_t without = 0;          // parts lacking a strict majority
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> close;

  void refresh(std::size_t part) {
    const int before = majority[part];
    int now = -1;
    for (int c = 0; c < q; ++c)
      if (2 * counts[part * q + c] > index->part_size(part)) now = c;
    if ((before == -1) != (now == -1)) without += now == -1 ? 1 : std::size_t(-1);
    majority[part] = now;
  }
  void reset(const std::vector<int>& col) {
    const std::size_t parts = index->count();
    counts.assign(parts * q, 0);
    majority.assign(parts, -1);
    without = parts;
    for (std::size_t v = 0; v < col.size(); ++v) ++counts[index->part_of[v] * q + col[v]];
    for (std::size_t i = 0; i < parts; ++i) refresh(i);
  }
  void change(std::size_t v, int from, int to, const std::vector<int>&) {
    const std::size_t p = index->part_of[v];
    --counts[p * q + from];
    ++counts[p * q + to];
    refresh(p);
  }
  void visit(const std::vector<int>&, std::size_t mono) {
    if (without != 0) return;
    const std::uint64_t rank = ground_state_rank(majority, q);
    auto& h = close[rank];
    if (h.empty()) h.assign(edges + 1, 0);
    ++h[mono];
  }
};

}  // namespace detail

/// Number of colourings with each monochromatic-edge count.
inline std::vector<std::uint64_t> monochromatic_histogram(const Graph& g, int q, const OracleOptions& opt = {}) {
  const std::size_t m = g.num_edges();
  auto hooks = detail::enumerate_colourings<detail::HistogramHook>(
      g, q, opt, [&] { return detail::HistogramHook{std::vector<std::uint64_t>(m + 1, 0)}; });
  std::vector<std::uint64_t> total(m + 1, 0);
  for (const auto& h : hooks)
    for (std::size_t c = 0; c <= m; ++c) total[c] += h.hist[c];
  return total;
}

/// log Z_G(β) by full enumeration.
inline double exact_log_z(const Graph& g, int q, double beta, const OracleOptions& opt = {}) {
  return log_from_histogram(monochromatic_histogram(g, q, opt), beta);
}

/// Per ground-state histograms of the colourings close to it, keyed by rank.
inline std::map<std::uint64_t, std::vector<std::uint64_t>> closeness_histograms(const Graph& g, const PartIndex& index,
                                                                                int q, const OracleOptions& opt = {}) {
  if (index.n != g.num_vertices()) throw PreconditionError("partition is for a different vertex count");
  ground_state_count(q, index.count());
  auto hooks = detail::enumerate_colourings<detail::ClosenessHook>(g, q, opt, [&] {
    detail::ClosenessHook h;
    h.index = &index;
    h.q = q;
    h.edges = g.num_edges();
    return h;
  });
  std::map<std::uint64_t, std::vector<std::uint64_t>> out;
  for (const auto& h : hooks) {
    for (const auto& [rank, hist] : h.close) {
      auto& dst = out[rank];
      if (dst.empty()) dst.assign(hist.size(), 0);
      for (std::size_t c = 0; c < hist.size(); ++c) dst[c] += hist[c];
    }
  }
  return out;
}

/// log Z* : colourings close to some ground state.
inline double exact_log_z_star(const Graph& g, const PartIndex& index, int q, double beta,
                               const OracleOptions& opt = {}) {
  std::vector<std::uint64_t> total(g.num_edges() + 1, 0);
  for (const auto& [rank, hist] : closeness_histograms(g, index, q, opt))
    for (std::size_t c = 0; c < hist.size(); ++c) total[c] += hist[c];
  return log_from_histogram(total, beta);
}

/// log Z^ψ : colourings close to ψ.
inline double exact_log_z_psi(const Graph& g, const PartIndex& index, const GroundState& psi, int q, double beta,
                              const OracleOptions& opt = {}) {
  check_ground_state(psi, index, q);
  const auto all = closeness_histograms(g, index, q, opt);
  const auto it = all.find(ground_state_rank(psi, q));
  if (it == all.end()) return -std::numeric_limits<double>::infinity();
  return log_from_histogram(it->second, beta);
}

/// log Σ over ω that differ from ψ exactly on a sparse set U of e^{β m_G(ω)}.
inline double sparse_state_log_sum(const Graph& g, const PartIndex& index, const GroundState& psi, int q, double beta,
                                   const OracleOptions& opt = {}) {
  require_mask_graph(g);
  check_ground_state(psi, index, q);
  const std::size_t n = g.num_vertices();
  const auto target = ground_state_colouring(index, psi);
  std::vector<Mask> nbr(n, 0), part_mask(index.count(), 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (Vertex w : g.neighbors(static_cast<Vertex>(v))) nbr[v] |= Mask{1} << w;
    part_mask[index.part_of[v]] |= Mask{1} << v;
  }
  auto sparse = [&](Mask u) {
    while (u != 0) {
      Mask comp = u & (~u + 1), frontier = comp;
      while (frontier != 0) {
        const int x = std::countr_zero(frontier);
        frontier &= frontier - 1;
        const Mask fresh = nbr[x] & u & ~comp;
        comp |= fresh;
        frontier |= fresh;
      }
      for (std::size_t i = 0; i < part_mask.size(); ++i)
        if (2 * static_cast<std::size_t>(std::popcount(comp & part_mask[i])) > index.part_size(i)) return false;
      u &= ~comp;
    }
    return true;
  };
  struct Hook {
    const std::vector<int>* target;
    const decltype(sparse)* is_sparse;
    std::vector<std::uint64_t> hist;
    Mask diff = 0;
    void reset(const std::vector<int>& col) {
      diff = 0;
      for (std::size_t v = 0; v < col.size(); ++v)
        if (col[v] != (*target)[v]) diff |= Mask{1} << v;
    }
    void change(std::size_t v, int, int to, const std::vector<int>&) {
      if (to != (*target)[v]) diff |= Mask{1} << v;
      else diff &= ~(Mask{1} << v);
    }
    void visit(const std::vector<int>&, std::size_t mono) {
      if ((*is_sparse)(diff)) ++hist[mono];
    }
  };
  const std::size_t m = g.num_edges();
  auto hooks = detail::enumerate_colourings<Hook>(
      g, q, opt, [&] { return Hook{&target, &sparse, std::vector<std::uint64_t>(m + 1, 0)}; });
  std::vector<std::uint64_t> total(m + 1, 0);
  for (const auto& h : hooks)
    for (std::size_t c = 0; c <= m; ++c) total[c] += h.hist[c];
  return log_from_histogram(total, beta);
}

/// log Ξ^ψ by enumerating every family of pairwise compatible polymers.
inline double exact_log_xi(const Graph& g, const PartIndex& index, const GroundState& psi, int q, double beta,
                           const OracleOptions& opt = {}) {
  check_ground_state(psi, index, q);
  std::size_t max_size = 0;
  for (const auto& p : index.parts) max_size += p.size() / 2;
  max_size = std::min(max_size, kPolymerSizeCap);
  const auto polymers = enumerate_polymers(g, index, max_size, opt.polymer_budget);
  const auto colouring = ground_state_colouring(index, psi);
  std::vector<double> logw;
  std::vector<Mask> blocked;
  for (const auto& p : polymers) {
    logw.push_back(polymer_log_weight(g, colouring, p.vertices, q, beta));
    blocked.push_back(closed_neighbourhood(g, p.mask));
  }
  double total = 0.0;  // empty family
  std::uint64_t families = 1;
  auto rec = [&](auto&& self, std::size_t start, Mask used, double lw) -> void {
    for (std::size_t j = start; j < polymers.size(); ++j) {
      if (polymers[j].mask & used) continue;
      if (++families > opt.family_budget)
        throw BudgetError("compatible family count exceeds budget " + std::to_string(opt.family_budget));
      const double next = lw + logw[j];
      total = log_add(total, next);
      self(self, j + 1, used | blocked[j], next);
    }
  };
  rec(rec, 0, 0, 0.0);
  return total;
}

}  // namespace ssepotts
