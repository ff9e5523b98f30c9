#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace ssepotts {

/// Uniform integer in [0, bound) from a 64-bit engine, by rejection; unlike
/// std::uniform_int_distribution this is identical across standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

inline Graph complete_graph(std::size_t n) {
  if (n < 2) throw PreconditionError("complete(n) needs n >= 2");
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  return Graph::from_edges(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw PreconditionError("cycle(n) needs n >= 3");
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v) edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>((v + 1) % n)});
  return Graph::from_edges(n, edges);
}

/// t cliques of size s; bridge b joins vertex i·s+b to (i+1)·s+b.
inline Graph clique_chain(std::size_t t, std::size_t s, std::size_t bridges) {
  if (t < 1 || s < 2) throw PreconditionError("clique-chain(t,s,b) needs t >= 1 and s >= 2");
  if (bridges > s) throw PreconditionError("clique-chain: more bridges than clique vertices");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t u = 0; u < s; ++u)
      for (std::size_t v = u + 1; v < s; ++v)
        edges.push_back({static_cast<Vertex>(i * s + u), static_cast<Vertex>(i * s + v)});
    if (i + 1 < t)
      for (std::size_t b = 0; b < bridges; ++b)
        edges.push_back({static_cast<Vertex>(i * s + b), static_cast<Vertex>((i + 1) * s + b)});
  }
  return Graph::from_edges(t * s, edges);
}

/// Uniform simple d-regular graph by the configuration model with rejection.
inline Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed, int max_attempts = 10000) {
  if (d < 1 || d >= n) throw PreconditionError("random-regular(n,d) needs 1 <= d < n");
  if ((n * d) % 2 != 0) throw PreconditionError("random-regular(n,d) needs n*d even");
  std::mt19937_64 rng(seed);
  std::vector<Vertex> stubs;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t i = 0; i < d; ++i) stubs.push_back(static_cast<Vertex>(v));
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[uniform_below(rng, i)]);
    std::set<std::pair<Vertex, Vertex>> seen;
    std::vector<Edge> edges;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size() && ok; i += 2) {
      Vertex u = stubs[i], v = stubs[i + 1];
      if (u > v) std::swap(u, v);
      ok = u != v && seen.insert({u, v}).second;
      edges.push_back({u, v});
    }
    if (ok) return Graph::from_edges(n, edges);
  }
  throw BudgetError("random-regular: no simple pairing found");
}

struct GeneratorSpec {
  std::string name;
  std::vector<std::size_t> args;
};

/// Parses "name(a,b,...)" with nonnegative integer arguments.
inline GeneratorSpec parse_generator_spec(std::string_view text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open || close + 1 != text.size())
    throw PreconditionError("generator spec must look like name(a,b,...)");
  GeneratorSpec spec{std::string(text.substr(0, open)), {}};
  std::string_view inner = text.substr(open + 1, close - open - 1);
  while (!inner.empty()) {
    const auto comma = inner.find(',');
    std::string_view tok = inner.substr(0, comma);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw PreconditionError("generator argument is not a nonnegative integer");
    spec.args.push_back(std::stoull(std::string(tok)));
    if (comma == std::string_view::npos) break;
    inner.remove_prefix(comma + 1);
  }
  return spec;
}

inline Graph generate(const GeneratorSpec& spec, std::uint64_t seed) {
  auto need = [&](std::size_t count) {
    if (spec.args.size() != count)
      throw PreconditionError(spec.name + " takes " + std::to_string(count) + " arguments");
  };
  if (spec.name == "random-regular") {
    need(2);
    return random_regular(spec.args[0], spec.args[1], seed);
  }
  if (spec.name == "clique-chain") {
    need(3);
    return clique_chain(spec.args[0], spec.args[1], spec.args[2]);
  }
  if (spec.name == "cycle") {
    need(1);
    return cycle_graph(spec.args[0]);
  }
  if (spec.name == "complete") {
    need(1);
    return complete_graph(spec.args[0]);
  }
  throw PreconditionError("unknown generator '" + spec.name + "'");
}

inline Graph generate(std::string_view text, std::uint64_t seed) { return generate(parse_generator_spec(text), seed); }

}  // namespace ssepotts
