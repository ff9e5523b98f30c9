#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cluster.hpp"
#include "errors.hpp"
#include "expansion.hpp"
#include "graph.hpp"
#include "ground_state.hpp"
#include "logmath.hpp"
#include "oracle.hpp"
#include "partition.hpp"
#include "polymer.hpp"

namespace ssepotts {

struct PottsOptions {
  int threads = 1;
  bool allow_bruteforce = true;
  ClusterOptions cluster;
  OracleOptions oracle;
  std::uint64_t ground_state_cap = kGroundStateCap;
  std::size_t expander_check_limit = kMaxExhaustiveVertices;
};

struct PsiTerm {
  GroundState colours;
  std::size_t monochromatic = 0;  // m_G(ψ)
  double log_xi = 0;
};

struct PottsResult {
  LogApprox approx;
  std::string mode;
  std::uint64_t ground_states = 0;
  int truncation_depth = 0;
  std::uint64_t clusters_evaluated = 0;
  double beta_threshold = 0;
  std::vector<PsiTerm> per_psi;
  // with-partition bookkeeping
  std::size_t bad_parts = 0;
  std::size_t removed_edges = 0;
};

inline double log_q_delta(int q, std::size_t delta) {
  return std::log(static_cast<double>(q) * static_cast<double>(delta));
}

/// (4 + 2 log(qΔ)) / α.
inline double expander_beta_threshold(int q, std::size_t delta, double alpha) {
  if (!(alpha > 0)) throw PreconditionError("alpha must be positive");
  return (4.0 + 2.0 * log_q_delta(q, delta)) / alpha;
}

/// max(4 + 2 log(qΔ), 2 + 4 log(qΔ)) / (αη).
inline double good_parts_beta_threshold(int q, std::size_t delta, double alpha, double eta) {
  if (!(alpha > 0)) throw PreconditionError("alpha must be positive");
  if (!(eta > 0)) throw PreconditionError("eta must be positive");
  const double l = log_q_delta(q, delta);
  return std::max(4.0 + 2.0 * l, 2.0 + 4.0 * l) / (alpha * eta);
}

/// C k⁶ (4 + 2 log(qΔ)) / (λ_k² δ).
inline double spectral_beta_threshold(int q, std::size_t delta, std::size_t min_degree, double lambda_k, int k,
                                      double C) {
  return C * std::pow(static_cast<double>(k), 6) * (4.0 + 2.0 * log_q_delta(q, delta)) /
         (lambda_k * lambda_k * static_cast<double>(min_degree));
}

/// Expansion constant certified for every part of an expander partition:
/// φ(G[P_i]) ≥ φ_in²/4 and min degree ≥ τδ.
inline double partition_alpha(const PartitionConstants& c, std::size_t min_degree) {
  return c.phi_in * c.phi_in / 4.0 * c.tau * static_cast<double>(min_degree);
}

namespace detail {

inline void check_beta(double beta, double threshold, const std::string& what) {
  if (!(beta > 0)) throw PreconditionError("beta must be positive");
  if (beta < threshold) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": beta=" << beta << " is below the required threshold beta >= " << threshold;
    throw PreconditionError(os.str());
  }
}

inline void check_q(int q) {
  if (q < 2) throw PreconditionError("q must be at least 2");
}

inline PottsResult exact_result(const Graph& g, int q, double beta, const OracleOptions& opt) {
  PottsResult r;
  r.mode = "bruteforce";
  r.approx = {exact_log_z(g, q, beta, opt), 0.0};
  return r;
}

/// Shared core: Ẑ = Σ_ψ exp(β m_G(ψ) + log Ξ̂^ψ) with each Ξ̂^ψ a ξ/2 approximation.
inline PottsResult good_parts_core(const Graph& g, const PartIndex& index, double alpha, int q, double beta,
                                   double xi, const PottsOptions& opt) {
  const std::size_t n = g.num_vertices();
  if (!(xi > 0)) throw PreconditionError("eps must be positive");
  xi = std::min(xi, 0.25);
  if (g.num_edges() == 0) {
    PottsResult r;
    r.mode = "bruteforce";
    r.approx = {static_cast<double>(n) * std::log(static_cast<double>(q)), 0.0};
    return r;
  }
  const bool tiny = xi <= std::exp(-static_cast<double>(n) / 2.0);
  if (tiny && opt.allow_bruteforce) return exact_result(g, q, beta, opt.oracle);

  PottsResult r;
  r.ground_states = ground_state_count(q, index.count(), opt.ground_state_cap);
  std::vector<GroundState> states;
  states.reserve(r.ground_states);
  for (std::uint64_t s = 0; s < r.ground_states; ++s) states.push_back(ground_state_at(s, q, index.count()));

  ClusterOptions copt = opt.cluster;
  copt.threads = opt.threads;
  const double zeta = xi / 2.0;
  const XiBatch batch = truncated_log_xi_batch(g, index, states, q, beta, zeta, alpha, copt);
  r.truncation_depth = batch.depth;
  r.clusters_evaluated = batch.clusters;

  std::vector<double> terms;
  terms.reserve(states.size());
  for (std::size_t s = 0; s < states.size(); ++s) {
    PsiTerm t{states[s], ground_state_monochromatic(g, index, states[s]), batch.log_xi[s]};
    terms.push_back(beta * static_cast<double>(t.monochromatic) + t.log_xi);
    r.per_psi.push_back(std::move(t));
  }
  const double eps = tiny ? std::max(xi, zeta + 2.0 * std::exp(-static_cast<double>(n))) : xi;
  r.approx = {log_sum_exp(terms), eps};
  return r;
}

inline void require_expander(const Graph& g, double alpha, std::size_t limit, const std::string& what) {
  if (g.num_vertices() > limit) return;
  const auto check = is_alpha_expander(g, alpha);
  if (!check.is_expander) {
    std::ostringstream os;
    os << what << ": graph is not an alpha-expander for alpha=" << alpha;
    if (check.witness) {
      os << " (violating set:";
      for (Vertex v : *check.witness) os << ' ' << v;
      os << ')';
    }
    throw PreconditionError(os.str());
  }
}

}  // namespace detail

/// Relative ξ-approximation of Z_G(β) for an α-expander, using the q
/// monochromatic colourings as ground states.
inline PottsResult approx_z_expander(const Graph& g, int q, double beta, double xi, double alpha,
                                     const PottsOptions& opt = {}) {
  detail::check_q(q);
  if (g.num_vertices() == 0) throw PreconditionError("empty graph");
  const std::size_t delta = g.max_degree();
  PottsResult r;
  if (delta > 0) {
    const double threshold = expander_beta_threshold(q, delta, alpha);
    detail::check_beta(beta, threshold, "approx_z_expander");
    detail::require_expander(g, alpha, opt.expander_check_limit, "approx_z_expander");
    r = detail::good_parts_core(g, PartIndex::single(g.num_vertices()), alpha, q, beta, xi, opt);
    r.beta_threshold = threshold;
  } else {
    r = detail::good_parts_core(g, PartIndex::single(g.num_vertices()), alpha, q, beta, xi, opt);
  }
  if (r.mode.empty()) r.mode = "expander";
  return r;
}

/// Relative ξ-approximation of Z_G(β) given a partition whose parts induce
/// α-expanders and all have at least η n vertices, η = min |P_i| / n.
inline PottsResult approx_z_good_parts(const Graph& g, const std::vector<VertexSet>& parts, double alpha, int q,
                                       double beta, double xi, const PottsOptions& opt = {}) {
  detail::check_q(q);
  const std::size_t n = g.num_vertices();
  if (n == 0) throw PreconditionError("empty graph");
  const PartIndex index(n, parts);
  const double eta = static_cast<double>(index.min_part_size()) / static_cast<double>(n);
  const std::size_t delta = g.max_degree();
  double threshold = 0;
  if (delta > 0) {
    threshold = good_parts_beta_threshold(q, delta, alpha, eta);
    detail::check_beta(beta, threshold, "approx_z_good_parts");
    for (const auto& p : parts) {
      const auto sub = induced_subgraph(g, p, true);
      detail::require_expander(sub.graph, alpha, opt.expander_check_limit, "approx_z_good_parts part");
    }
  }
  PottsResult r = detail::good_parts_core(g, index, alpha, q, beta, xi, opt);
  r.beta_threshold = threshold;
  if (r.mode.empty()) r.mode = "partition";
  return r;
}

/// Parts with fewer than η n vertices are cut out along their boundary edges
/// and approximated separately as expanders; the rest go through the
/// good-parts pipeline. The error grows by βX/2 for X removed edges.
inline PottsResult approx_z_with_partition(const Graph& g, const std::vector<VertexSet>& parts, double alpha, int q,
                                           double beta, double xi, double eta, const PottsOptions& opt = {}) {
  detail::check_q(q);
  const std::size_t n = g.num_vertices();
  if (n == 0) throw PreconditionError("empty graph");
  if (!(eta > 0) || eta > 1) throw PreconditionError("eta must lie in (0, 1]");
  if (!(xi > 0)) throw PreconditionError("eps must be positive");
  const PartIndex index(n, parts);
  const std::size_t delta = g.max_degree();
  double threshold = 0;
  if (delta > 0) {
    threshold = good_parts_beta_threshold(q, delta, alpha, eta);
    detail::check_beta(beta, threshold, "approx_z_with_partition");
  }

  std::vector<VertexSet> bad, good;
  for (const auto& p : parts) {
    if (static_cast<double>(p.size()) < eta * static_cast<double>(n)) bad.push_back(p);
    else good.push_back(p);
  }

  std::vector<std::uint8_t> in_bad(n, 0);
  for (const auto& p : bad)
    for (Vertex v : p) in_bad[v] = 1;
  std::size_t removed = 0;
  for (const Edge& e : g.edges())
    if ((in_bad[e.u] || in_bad[e.v]) && index.part_of[e.u] != index.part_of[e.v]) ++removed;

  PottsResult r;
  r.bad_parts = bad.size();
  r.removed_edges = removed;
  double log_value = beta * static_cast<double>(removed) / 2.0;

  if (!good.empty()) {
    VertexSet rest;
    for (const auto& p : good) rest = rest.unite(p);
    const auto sub = induced_subgraph(g, rest, true);
    std::vector<int> local(n, -1);
    for (std::size_t i = 0; i < sub.to_parent.size(); ++i) local[sub.to_parent[i]] = static_cast<int>(i);
    std::vector<VertexSet> local_parts;
    for (const auto& p : good) {
      std::vector<Vertex> ids;
      for (Vertex v : p) ids.push_back(local[v]);
      local_parts.emplace_back(std::move(ids));
    }
    PottsResult inner = approx_z_good_parts(sub.graph, local_parts, alpha, q, beta, xi, opt);
    log_value += inner.approx.log_value;
    r.ground_states = inner.ground_states;
    r.truncation_depth = inner.truncation_depth;
    r.clusters_evaluated += inner.clusters_evaluated;
    r.per_psi = std::move(inner.per_psi);
  }
  for (const auto& p : bad) {
    const auto sub = induced_subgraph(g, p, true);
    const PottsResult part = approx_z_expander(sub.graph, q, beta, xi, alpha, opt);
    log_value += part.approx.log_value;
    r.clusters_evaluated += part.clusters_evaluated;
    r.truncation_depth = std::max(r.truncation_depth, part.truncation_depth);
  }
  const double s = static_cast<double>(bad.size());
  r.approx = {log_value, (s + 1.0) * std::min(xi, 0.25) + beta * static_cast<double>(removed) / 2.0};
  r.mode = "partition";
  r.beta_threshold = threshold;
  return r;
}

struct SseOptions {
  PottsOptions potts;
  PartitionParams partition;
};

struct SseResult {
  PottsResult potts;
  ExpanderPartition partition;
  double alpha = 0;
};

/// β threshold for the end-to-end pipeline on a computed partition: the
/// larger of the spectral bound and the good-parts bound with η = 1/k.
inline double sse_beta_threshold(const Graph& g, const ExpanderPartition& part, int q) {
  const double alpha = partition_alpha(part.constants, g.min_degree());
  const double spectral =
      spectral_beta_threshold(q, g.max_degree(), g.min_degree(), part.constants.lambda_k, part.k, part.C);
  return std::max(spectral, good_parts_beta_threshold(q, g.max_degree(), alpha, 1.0 / part.k));
}

/// Relative ε-approximation of Z_G(β) for graphs with λ_k > 0 and β above the
/// spectral threshold: partitions into expanders, then runs the cluster
/// expansion around the q^ℓ part-wise monochromatic colourings.
inline SseResult approx_z_sse(const Graph& g, int k, int q, double beta, double eps, const SseOptions& opt = {}) {
  detail::check_q(q);
  if (!(eps > 0)) throw PreconditionError("eps must be positive");
  PartitionParams pp = opt.partition;
  pp.k = k;
  SseResult out;
  out.partition = partition_into_expanders(g, pp);
  if (!out.partition.report.ok()) throw std::logic_error("expander partition failed its certificates");
  out.alpha = partition_alpha(out.partition.constants, g.min_degree());
  const double threshold = sse_beta_threshold(g, out.partition, q);
  detail::check_beta(beta, threshold, "approx_z_sse");

  const double n = static_cast<double>(g.num_vertices());
  const double eta = 1.0 / k;
  bool all_good = true;
  for (const auto& p : out.partition.parts)
    if (static_cast<double>(p.size()) < eta * n) all_good = false;

  PottsOptions po = opt.potts;
  po.expander_check_limit = 0;  // parts are certified by the partition itself
  if (all_good) {
    out.potts = approx_z_good_parts(g, out.partition.parts, out.alpha, q, beta, eps, po);
    if (out.potts.mode != "bruteforce") out.potts.mode = "sse";
  } else {
    out.potts = approx_z_with_partition(g, out.partition.parts, out.alpha, q, beta, eps, eta, po);
  }
  out.potts.beta_threshold = threshold;
  return out;
}

/// q e^{β|E|}: within ε of Z once β ≥ (n-1) log q - log(e^ε - 1).
inline double ground_state_log_estimate(const Graph& g, int q, double beta) {
  return std::log(static_cast<double>(q)) + beta * static_cast<double>(g.num_edges());
}

inline double ground_state_dominance_threshold(std::size_t n, int q, double eps) {
  return (static_cast<double>(n) - 1.0) * std::log(static_cast<double>(q)) - std::log(std::expm1(eps));
}

}  // namespace ssepotts
