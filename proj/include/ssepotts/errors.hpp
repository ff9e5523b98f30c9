#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssepotts {

// Input or parameter outside an operation's contract.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Edge-list text that does not describe a valid graph.
struct ParseError : PreconditionError {
  ParseError(std::size_t line, const std::string& what)
      : PreconditionError("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

// An enumeration cap or iteration budget was exceeded. Oracles never truncate silently.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ssepotts
