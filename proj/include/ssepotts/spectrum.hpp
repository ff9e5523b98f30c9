#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace ssepotts {

/// Eigen-decomposition of a symmetric matrix: values ascending, vectors stored
/// row-wise (vector i occupies [i*n, (i+1)*n)).
struct Spectrum {
  std::size_t n = 0;
  std::vector<double> values;
  std::vector<double> vectors;

  std::span<const double> vector(std::size_t i) const { return {vectors.data() + i * n, n}; }
};

struct JacobiOptions {
  double tolerance = 1e-12;  // off-diagonal Frobenius norm, relative to max(1, ||A||_F)
  int max_sweeps = 100;
};

/// Cyclic Jacobi rotations on a dense symmetric matrix given row-major.
///
/// Eigenvectors are sign-normalised so that the entry of largest magnitude
/// (lowest index among ties) is positive.
inline Spectrum jacobi_eigen(std::vector<double> a, std::size_t n, const JacobiOptions& opt = {}) {
  if (a.size() != n * n) throw PreconditionError("jacobi_eigen: matrix size mismatch");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&] {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2 * a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
  };
  double frob = 0;
  for (double x : a) frob += x * x;
  const double target = opt.tolerance * std::max(1.0, std::sqrt(frob));

  int sweep = 0;
  while (off_norm() > target) {
    if (sweep++ >= opt.max_sweeps) throw std::runtime_error("jacobi_eigen: no convergence within sweep cap");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p], aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });

  Spectrum out;
  out.n = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t col = order[i];
    out.values[i] = a[col * n + col];
    std::size_t big = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (std::abs(v[k * n + col]) > std::abs(v[big * n + col])) big = k;
    const double sign = v[big * n + col] < 0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) out.vectors[i * n + k] = sign * v[k * n + col];
  }
  return out;
}

/// L = I - D^{-1/2} A D^{-1/2}, dense row-major.
inline std::vector<double> normalized_laplacian(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<double> inv_sqrt(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (g.degree(static_cast<Vertex>(v)) == 0)
      throw PreconditionError("normalized Laplacian undefined with isolated vertices");
    inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(static_cast<Vertex>(v))));
  }
  std::vector<double> l(n * n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    l[u * n + u] = 1.0;
    for (Vertex w : g.neighbors(static_cast<Vertex>(u))) l[u * n + w] = -inv_sqrt[u] * inv_sqrt[w];
  }
  return l;
}

inline Spectrum normalized_laplacian_spectrum(const Graph& g) {
  if (g.num_vertices() == 0) throw PreconditionError("spectrum of the empty graph");
  return jacobi_eigen(normalized_laplacian(g), g.num_vertices());
}

}  // namespace ssepotts
