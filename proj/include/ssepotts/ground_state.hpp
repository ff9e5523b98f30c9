#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace ssepotts {

inline constexpr std::uint64_t kGroundStateCap = 1'000'000;

/// Part membership lookup for a partition of V.
struct PartIndex {
  std::size_t n = 0;
  std::vector<VertexSet> parts;
  std::vector<int> part_of;

  PartIndex() = default;
  PartIndex(std::size_t num_vertices, std::vector<VertexSet> ps) : n(num_vertices), parts(std::move(ps)) {
    part_of.assign(n, -1);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].empty()) throw PreconditionError("partition has an empty part");
      parts[i].check_range(n);
      for (Vertex v : parts[i]) {
        if (part_of[v] != -1) throw PreconditionError("partition parts overlap at vertex " + std::to_string(v));
        part_of[v] = static_cast<int>(i);
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (part_of[v] == -1) throw PreconditionError("partition misses vertex " + std::to_string(v));
  }

  static PartIndex single(std::size_t n) { return PartIndex(n, {VertexSet::all(n)}); }

  std::size_t count() const { return parts.size(); }
  std::size_t part_size(std::size_t i) const { return parts[i].size(); }
  std::size_t min_part_size() const {
    std::size_t best = n;
    for (const auto& p : parts) best = std::min(best, p.size());
    return best;
  }
};

/// One colour in [0, q) per part.
using GroundState = std::vector<int>;

inline std::uint64_t ground_state_count(int q, std::size_t parts, std::uint64_t cap = kGroundStateCap) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < parts; ++i) {
    total *= static_cast<std::uint64_t>(q);
    if (total > cap)
      throw BudgetError("q^l ground states exceed the cap of " + std::to_string(cap));
  }
  return total;
}

/// Ground states in lexicographic order, part 0 most significant.
inline GroundState ground_state_at(std::uint64_t rank, int q, std::size_t parts) {
  GroundState psi(parts, 0);
  for (std::size_t i = parts; i-- > 0;) {
    psi[i] = static_cast<int>(rank % static_cast<std::uint64_t>(q));
    rank /= static_cast<std::uint64_t>(q);
  }
  return psi;
}

inline std::uint64_t ground_state_rank(const GroundState& psi, int q) {
  std::uint64_t r = 0;
  for (int c : psi) r = r * static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(c);
  return r;
}

inline void check_ground_state(const GroundState& psi, const PartIndex& index, int q) {
  if (psi.size() != index.count()) throw PreconditionError("ground state length differs from the number of parts");
  for (int c : psi)
    if (c < 0 || c >= q) throw PreconditionError("ground state colour out of range");
}

/// Per-vertex colouring induced by ψ.
inline std::vector<int> ground_state_colouring(const PartIndex& index, const GroundState& psi) {
  std::vector<int> colours(index.n);
  for (std::size_t v = 0; v < index.n; ++v) colours[v] = psi[index.part_of[v]];
  return colours;
}

}  // namespace ssepotts
