#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace ssepotts {

using Vertex = int;

struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph in compressed adjacency form. Neighbour lists are
/// sorted. Immutable after construction.
///
/// Isolated vertices are rejected unless explicitly allowed; interior steps of
/// the algorithms (induced subgraphs of shrinking parts) are the only callers
/// that allow them.
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(std::size_t n, std::span<const Edge> edges, bool allow_isolated = false) {
    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (const Edge& e : edges) {
      if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n || static_cast<std::size_t>(e.v) >= n)
        throw PreconditionError("edge endpoint out of range");
      if (e.u == e.v) throw PreconditionError("self-loop at vertex " + std::to_string(e.u));
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.adj_.resize(g.offsets_.back());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : edges) {
      g.adj_[fill[e.u]++] = e.v;
      g.adj_[fill[e.v]++] = e.u;
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto first = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
      auto last = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
      std::sort(first, last);
      if (std::adjacent_find(first, last) != last)
        throw PreconditionError("duplicate edge at vertex " + std::to_string(v));
      if (first == last && !allow_isolated)
        throw PreconditionError("isolated vertex " + std::to_string(v));
    }
    g.m_ = g.adj_.size() / 2;
    return g;
  }

  std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return m_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::int64_t degree(Vertex v) const { return static_cast<std::int64_t>(offsets_[v + 1] - offsets_[v]); }

  bool has_edge(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  std::int64_t max_degree() const {
    std::int64_t d = 0;
    for (std::size_t v = 0; v < num_vertices(); ++v) d = std::max(d, degree(static_cast<Vertex>(v)));
    return d;
  }
  std::int64_t min_degree() const {
    if (num_vertices() == 0) return 0;
    std::int64_t d = degree(0);
    for (std::size_t v = 1; v < num_vertices(); ++v) d = std::min(d, degree(static_cast<Vertex>(v)));
    return d;
  }
  bool has_isolated_vertex() const { return num_vertices() > 0 && min_degree() == 0; }

  /// Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (std::size_t u = 0; u < num_vertices(); ++u)
      for (Vertex v : neighbors(static_cast<Vertex>(u)))
        if (static_cast<Vertex>(u) < v) out.push_back({static_cast<Vertex>(u), v});
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.adj_ == b.adj_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adj_;
  std::size_t m_ = 0;
};

/// Sorted set of distinct vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> ids) : VertexSet(std::vector<Vertex>(ids)) {}
  explicit VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
      throw PreconditionError("VertexSet: duplicate vertex id");
  }

  static VertexSet all(std::size_t n) {
    VertexSet s;
    s.ids_.resize(n);
    std::iota(s.ids_.begin(), s.ids_.end(), 0);
    return s;
  }
  static VertexSet from_mask(std::span<const std::uint8_t> mask) {
    VertexSet s;
    for (std::size_t v = 0; v < mask.size(); ++v)
      if (mask[v]) s.ids_.push_back(static_cast<Vertex>(v));
    return s;
  }
  static VertexSet from_bits(std::uint64_t bits) {
    VertexSet s;
    for (Vertex v = 0; bits != 0; ++v, bits >>= 1)
      if (bits & 1U) s.ids_.push_back(v);
    return s;
  }

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool contains(Vertex v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  Vertex operator[](std::size_t i) const { return ids_[i]; }
  const std::vector<Vertex>& ids() const { return ids_; }

  /// Throws if any id lies outside [0, n).
  void check_range(std::size_t n) const {
    if (!ids_.empty() && (ids_.front() < 0 || static_cast<std::size_t>(ids_.back()) >= n))
      throw PreconditionError("vertex id out of range");
  }

  std::vector<std::uint8_t> mask(std::size_t n) const {
    check_range(n);
    std::vector<std::uint8_t> m(n, 0);
    for (Vertex v : ids_) m[v] = 1;
    return m;
  }

  VertexSet complement(std::size_t n) const {
    auto m = mask(n);
    for (auto& b : m) b = !b;
    return from_mask(m);
  }
  VertexSet minus(const VertexSet& other) const {
    VertexSet s;
    std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(s.ids_));
    return s;
  }
  VertexSet intersect(const VertexSet& other) const {
    VertexSet s;
    std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                          std::back_inserter(s.ids_));
    return s;
  }
  VertexSet unite(const VertexSet& other) const {
    VertexSet s;
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(s.ids_));
    return s;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet& a, const VertexSet& b) { return a.ids_ <=> b.ids_; }

 private:
  std::vector<Vertex> ids_;
};

// ---------------------------------------------------------------------------
// Volumes, boundaries and conductance

inline std::int64_t volume(const Graph& g, const VertexSet& s) {
  s.check_range(g.num_vertices());
  std::int64_t vol = 0;
  for (Vertex v : s) vol += g.degree(v);
  return vol;
}

inline std::int64_t total_volume(const Graph& g) { return 2 * static_cast<std::int64_t>(g.num_edges()); }

/// Number of edges with one endpoint in s and the other in t \ s.
inline std::int64_t edges_between(const Graph& g, const VertexSet& s, const VertexSet& t) {
  const auto in_s = s.mask(g.num_vertices());
  const auto in_t = t.mask(g.num_vertices());
  std::int64_t count = 0;
  for (Vertex u : s)
    for (Vertex v : g.neighbors(u))
      if (in_t[v] && !in_s[v]) ++count;
  return count;
}

/// Mask form of edges_between, for hot loops that already hold membership arrays.
inline std::int64_t edges_between(const Graph& g, std::span<const std::uint8_t> in_s,
                                  std::span<const std::uint8_t> in_t) {
  std::int64_t count = 0;
  for (std::size_t u = 0; u < in_s.size(); ++u) {
    if (!in_s[u]) continue;
    for (Vertex v : g.neighbors(static_cast<Vertex>(u)))
      if (in_t[v] && !in_s[v]) ++count;
  }
  return count;
}

/// Number of neighbours of v inside the set given by mask.
inline std::int64_t degree_into(const Graph& g, Vertex v, std::span<const std::uint8_t> mask) {
  std::int64_t d = 0;
  for (Vertex w : g.neighbors(v)) d += mask[w];
  return d;
}

/// |∂(s)|: edges with exactly one endpoint in s.
inline std::int64_t boundary_size(const Graph& g, const VertexSet& s) {
  const auto in_s = s.mask(g.num_vertices());
  std::int64_t count = 0;
  for (Vertex u : s)
    for (Vertex v : g.neighbors(u)) count += !in_s[v];
  return count;
}

/// |∇(s)|: edges with at least one endpoint in s.
inline std::int64_t closure_size(const Graph& g, const VertexSet& s) {
  const auto in_s = s.mask(g.num_vertices());
  std::int64_t boundary = 0, inside_twice = 0;
  for (Vertex u : s)
    for (Vertex v : g.neighbors(u)) (in_s[v] ? inside_twice : boundary) += 1;
  return boundary + inside_twice / 2;
}

/// φ(s) = |∂s| / vol(s).
inline Rational conductance(const Graph& g, const VertexSet& s) {
  if (s.empty()) throw PreconditionError("conductance of the empty set");
  const std::int64_t vol = volume(g, s);
  if (vol == 0) throw PreconditionError("conductance of a set of isolated vertices is undefined");
  return Rational(boundary_size(g, s), vol);
}

// ---------------------------------------------------------------------------
// Subgraphs and components

struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> to_parent;  // local id -> id in the parent graph
};

inline InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s, bool allow_isolated = false) {
  if (s.empty()) throw PreconditionError("induced subgraph on the empty set");
  const std::size_t n = g.num_vertices();
  s.check_range(n);
  std::vector<Vertex> local(n, -1);
  for (std::size_t i = 0; i < s.size(); ++i) local[s[i]] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (Vertex u : s)
    for (Vertex v : g.neighbors(u))
      if (local[v] >= 0 && u < v) edges.push_back({local[u], local[v]});
  return {Graph::from_edges(s.size(), edges, allow_isolated), s.ids()};
}

/// Component label for every vertex of g[mask] (label -1 outside the mask).
/// Labels are assigned in order of smallest member.
inline std::vector<int> component_labels(const Graph& g, std::span<const std::uint8_t> mask) {
  const std::size_t n = g.num_vertices();
  std::vector<int> label(n, -1);
  std::vector<Vertex> stack;
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (!mask[s] || label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(static_cast<Vertex>(s));
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex v : g.neighbors(u))
        if (mask[v] && label[v] < 0) {
          label[v] = next;
          stack.push_back(v);
        }
    }
    ++next;
  }
  return label;
}

/// Connected components of g[s], each sorted, ordered by smallest member.
inline std::vector<VertexSet> components(const Graph& g, const VertexSet& s) {
  const auto mask = s.mask(g.num_vertices());
  const auto label = component_labels(g, mask);
  int count = 0;
  for (int l : label) count = std::max(count, l + 1);
  std::vector<std::vector<Vertex>> parts(count);
  for (Vertex v : s) parts[label[v]].push_back(v);
  std::vector<VertexSet> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.emplace_back(std::move(p));
  return out;
}

inline std::size_t num_components(const Graph& g) {
  return components(g, VertexSet::all(g.num_vertices())).size();
}

inline bool is_connected_subset(const Graph& g, const VertexSet& s) {
  return !s.empty() && components(g, s).size() == 1;
}

// ---------------------------------------------------------------------------
// Edge-list text format

/// Parses "u v" lines. Blank lines and anything after '#' are ignored. The
/// first data line is read as an "n m" header when n equals one more than the
/// largest id on the remaining lines and m equals their count.
inline Graph parse_edge_list(std::string_view text) {
  struct Row {
    std::size_t line;
    std::int64_t a, b;
  };
  std::vector<Row> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;

    std::int64_t vals[2];
    std::size_t count = 0;
    std::size_t p = first;
    while (p < line.size()) {
      while (p < line.size() && (line[p] == ' ' || line[p] == '\t')) ++p;
      if (p >= line.size()) break;
      if (count == 2) throw ParseError(line_no, "expected two integers");
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(line.data() + p, line.data() + line.size(), value);
      if (ec != std::errc() || (ptr != line.data() + line.size() && *ptr != ' ' && *ptr != '\t'))
        throw ParseError(line_no, "malformed token");
      if (value < 0) throw ParseError(line_no, "negative vertex id");
      vals[count++] = value;
      p = static_cast<std::size_t>(ptr - line.data());
    }
    if (count != 2) throw ParseError(line_no, "expected two integers");
    rows.push_back({line_no, vals[0], vals[1]});
  }
  if (rows.empty()) throw ParseError(line_no, "no edges");

  std::size_t start = 0;
  if (rows.size() >= 1) {
    std::int64_t max_id = -1;
    for (std::size_t i = 1; i < rows.size(); ++i) max_id = std::max({max_id, rows[i].a, rows[i].b});
    if (rows.size() > 1 && rows[0].a == max_id + 1 && rows[0].b == static_cast<std::int64_t>(rows.size() - 1))
      start = 1;
  }

  std::int64_t max_id = -1;
  std::vector<Edge> edges;
  std::vector<std::size_t> lines;
  for (std::size_t i = start; i < rows.size(); ++i) {
    const Row& r = rows[i];
    if (r.a == r.b) throw ParseError(r.line, "self-loop at vertex " + std::to_string(r.a));
    if (r.a > INT32_MAX || r.b > INT32_MAX) throw ParseError(r.line, "vertex id too large");
    max_id = std::max({max_id, r.a, r.b});
    edges.push_back({static_cast<Vertex>(std::min(r.a, r.b)), static_cast<Vertex>(std::max(r.a, r.b))});
    lines.push_back(r.line);
  }
  if (edges.empty()) throw ParseError(line_no, "no edges");
  const std::size_t n = static_cast<std::size_t>(max_id + 1);

  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return edges[x] < edges[y]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (edges[order[i]] == edges[order[i - 1]])
      throw ParseError(std::max(lines[order[i]], lines[order[i - 1]]),
                       "duplicate edge " + std::to_string(edges[order[i]].u) + " " +
                           std::to_string(edges[order[i]].v));

  std::vector<std::uint8_t> seen(n, 0);
  for (const Edge& e : edges) seen[e.u] = seen[e.v] = 1;
  for (std::size_t v = 0; v < n; ++v)
    if (!seen[v]) throw ParseError(line_no, "isolated vertex " + std::to_string(v));

  return Graph::from_edges(n, edges);
}

/// Canonical form: "n m" header, then edges u < v in sorted order.
inline std::string serialize_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

}  // namespace ssepotts
