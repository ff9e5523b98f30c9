#pragma once

// Independent brute-force reference implementations used only by the tests.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <random>
#include <vector>

#include <ssepotts/graph.hpp>
#include <ssepotts/rational.hpp>

namespace oracle {

using ssepotts::Edge;
using ssepotts::Graph;
using ssepotts::Vertex;
using ssepotts::VertexSet;

inline std::vector<Edge> edge_list(const Graph& g) { return g.edges(); }

inline bool in(std::uint64_t mask, int v) { return (mask >> v) & 1U; }

inline int boundary(const Graph& g, std::uint64_t s) {
  int b = 0;
  for (const Edge& e : g.edges()) b += in(s, e.u) != in(s, e.v);
  return b;
}

inline int closure(const Graph& g, std::uint64_t s) {
  int c = 0;
  for (const Edge& e : g.edges()) c += in(s, e.u) || in(s, e.v);
  return c;
}

inline int volume(const Graph& g, std::uint64_t s) {
  int v = 0;
  for (const Edge& e : g.edges()) v += in(s, e.u) + in(s, e.v);
  return v;
}

inline bool connected(const Graph& g, std::uint64_t s) {
  if (s == 0) return false;
  const int start = __builtin_ctzll(s);
  std::uint64_t seen = std::uint64_t{1} << start;
  std::queue<int> todo;
  todo.push(start);
  const auto edges = g.edges();
  while (!todo.empty()) {
    const int x = todo.front();
    todo.pop();
    for (const Edge& e : edges) {
      int y = -1;
      if (e.u == x) y = e.v;
      if (e.v == x) y = e.u;
      if (y >= 0 && in(s, y) && !in(seen, y)) {
        seen |= std::uint64_t{1} << y;
        todo.push(y);
      }
    }
  }
  return seen == s;
}

/// Minimum conductance over nonempty S with vol(S) ≤ vol(V)/2.
inline ssepotts::Rational min_conductance(const Graph& g) {
  const int n = static_cast<int>(g.num_vertices());
  const int total = volume(g, (std::uint64_t{1} << n) - 1);
  bool first = true;
  ssepotts::Rational best(1);
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    const int vol = volume(g, s);
    if (vol == 0 || 2 * vol > total) continue;
    const ssepotts::Rational phi(boundary(g, s), vol);
    if (first || phi < best) best = phi;
    first = false;
  }
  return best;
}

/// min |∂S|/|S| over nonempty S with |S| ≤ n/2.
inline ssepotts::Rational edge_expansion(const Graph& g) {
  const int n = static_cast<int>(g.num_vertices());
  bool first = true;
  ssepotts::Rational best(0);
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    const int size = __builtin_popcountll(s);
    if (2 * size > n) continue;
    const ssepotts::Rational r(boundary(g, s), size);
    if (first || r < best) best = r;
    first = false;
  }
  return best;
}

inline std::vector<double> eigen_spectrum(const Graph& g) {
  const int n = static_cast<int>(g.num_vertices());
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  for (const Edge& e : g.edges()) {
    const double w = -1.0 / std::sqrt(static_cast<double>(g.degree(e.u)) * g.degree(e.v));
    l(e.u, e.v) = w;
    l(e.v, e.u) = w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return out;
}

inline std::size_t mono(const Graph& g, const std::vector<int>& col) {
  std::size_t m = 0;
  for (const Edge& e : g.edges()) m += col[e.u] == col[e.v];
  return m;
}

/// Calls fn(colouring) for every colouring in [q]^n, by recursion.
template <typename Fn>
void each_colouring(std::size_t n, int q, Fn&& fn) {
  std::vector<int> col(n, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      fn(col);
      return;
    }
    for (int c = 0; c < q; ++c) {
      col[i] = c;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

/// log Σ exp(terms) with plain max shifting, used as an independent reference.
inline double lse(const std::vector<double>& t) {
  if (t.empty()) return -INFINITY;
  const double hi = *std::max_element(t.begin(), t.end());
  double s = 0;
  for (double x : t) s += std::exp(x - hi);
  return hi + std::log(s);
}

inline double log_z(const Graph& g, int q, double beta) {
  std::vector<double> terms;
  each_colouring(g.num_vertices(), q, [&](const std::vector<int>& col) { terms.push_back(beta * mono(g, col)); });
  return lse(terms);
}

/// Random graph without isolated vertices: G(n,p) plus a random neighbour for
/// any vertex left isolated.
inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::bernoulli_distribution coin(p);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (coin(rng)) adj[u][v] = adj[v][u] = true;
  for (std::size_t u = 0; u < n; ++u) {
    if (std::find(adj[u].begin(), adj[u].end(), true) != adj[u].end()) continue;
    std::size_t v = u;
    while (v == u) v = rng() % n;
    adj[u][v] = adj[v][u] = true;
  }
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (adj[u][v]) edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  return Graph::from_edges(n, edges);
}

inline Graph random_connected_graph(std::size_t n, double p, std::mt19937_64& rng) {
  while (true) {
    Graph g = random_graph(n, p, rng);
    if (connected(g, (std::uint64_t{1} << n) - 1)) return g;
  }
}

/// Every labelled graph on n vertices without isolated vertices.
inline std::vector<Graph> all_graphs(std::size_t n) {
  std::vector<Edge> pairs;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) pairs.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  std::vector<Graph> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << pairs.size()); ++s) {
    std::vector<Edge> edges;
    std::vector<int> deg(n, 0);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (in(s, static_cast<int>(i))) {
        edges.push_back(pairs[i]);
        ++deg[pairs[i].u];
        ++deg[pairs[i].v];
      }
    if (std::find(deg.begin(), deg.end(), 0) != deg.end()) continue;
    out.push_back(Graph::from_edges(n, edges));
  }
  return out;
}

inline Graph graph(std::size_t n, std::initializer_list<std::pair<int, int>> es) {
  std::vector<Edge> edges;
  for (auto [u, v] : es) edges.push_back({u, v});
  return Graph::from_edges(n, edges, true);
}

}  // namespace oracle
