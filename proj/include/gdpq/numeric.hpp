#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gdpq {

/// Closed interval [lo, hi] used for range propagation over variable boxes.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

inline Interval interval_add(Interval a, Interval b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

inline Interval interval_scale(double k, Interval a) {
  if (k >= 0) return {k * a.lo, k * a.hi};
  return {k * a.hi, k * a.lo};
}

inline Interval interval_mul(Interval a, Interval b) {
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)),
          std::max(std::max(p1, p2), std::max(p3, p4))};
}

/// Range of x^2 over [lo, hi]; dependency-aware, so [-1,1]^2 -> [0,1].
inline Interval interval_square(Interval a) {
  const double s1 = a.lo * a.lo;
  const double s2 = a.hi * a.hi;
  const double hi = std::max(s1, s2);
  const double lo = (a.lo <= 0.0 && a.hi >= 0.0) ? 0.0 : std::min(s1, s2);
  return {lo, hi};
}

/// Range of x^k over [lo, hi] for integer k >= 0 (dependency-aware).
inline Interval interval_pow(Interval a, int k) {
  if (k == 0) return {1.0, 1.0};
  if (k == 1) return a;
  if (k % 2 == 0) {
    Interval sq = interval_square(a);
    Interval out = sq;
    for (int i = 2; i < k; i += 2) out = interval_mul(out, sq);
    return out;
  }
  // Odd powers are monotone.
  double plo = 1.0, phi = 1.0;
  for (int i = 0; i < k; ++i) {
    plo *= a.lo;
    phi *= a.hi;
  }
  return {plo, phi};
}

/// Eigenvalues of a dense symmetric n x n matrix (row-major) via cyclic
/// Jacobi sweeps. Matrices here are small (instance dimensions), so no
/// attempt is made at large-scale performance.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a,
                                                 std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("matrix size mismatch");
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return a[i * n + j];
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

inline double min_symmetric_eigenvalue(const std::vector<double>& a,
                                       std::size_t n) {
  if (n == 0) return 0.0;
  return symmetric_eigenvalues(a, n).front();
}

}  // namespace gdpq
