#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace ssepotts {

/// Relative approximation in log space: e^{-eps_bound} ≤ z/ẑ ≤ e^{eps_bound}.
struct LogApprox {
  double log_value = 0;
  double eps_bound = 0;
};

inline double log_sum_exp(std::span<const double> xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double s = 0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

/// log Σ_c count[c]·e^{βc} for a histogram of integer exponents.
inline double log_from_histogram(std::span<const std::uint64_t> counts, double beta) {
  std::vector<double> terms;
  terms.reserve(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] != 0) terms.push_back(std::log(static_cast<double>(counts[c])) + beta * static_cast<double>(c));
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  return log_sum_exp(terms);
}

}  // namespace ssepotts
