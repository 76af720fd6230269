#pragma once

#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ffd/rational.hpp"

namespace ffd {

/// Fraction-free (Bareiss) determinant of an integer matrix. Every division
/// in the elimination is exact, so the result is the exact integer determinant.
template <typename Derived>
BigInt bareiss_determinant(const Eigen::MatrixBase<Derived>& a) {
  static_assert(std::is_integral_v<typename Derived::Scalar>,
                "bareiss_determinant expects an integer matrix");
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const Eigen::Index n = a.rows();
  if (n == 0) return 1;

  std::vector<BigInt> w(static_cast<std::size_t>(n * n));
  auto at = [&](Eigen::Index r, Eigen::Index c) -> BigInt& {
    return w[static_cast<std::size_t>(r * n + c)];
  };
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) at(r, c) = static_cast<long long>(a(r, c));

  BigInt previous = 1;
  bool negate = false;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      Eigen::Index pivot = k + 1;
      while (pivot < n && at(pivot, k) == 0) ++pivot;
      if (pivot == n) return 0;
      for (Eigen::Index c = k; c < n; ++c) std::swap(at(k, c), at(pivot, c));
      negate = !negate;
    }
    for (Eigen::Index r = k + 1; r < n; ++r) {
      for (Eigen::Index c = k + 1; c < n; ++c)
        at(r, c) = (at(r, c) * at(k, k) - at(r, k) * at(k, c)) / previous;
      at(r, k) = 0;
    }
    previous = at(k, k);
  }
  BigInt det = at(n - 1, n - 1);
  return negate ? BigInt(-det) : det;
}

/// Floating-point determinant through Eigen's LU. A cross-check only; never
/// used for ranking.
template <typename Derived>
double float_determinant(const Eigen::MatrixBase<Derived>& a) {
  return a.template cast<double>().determinant();
}

/// Sum of squares of the off-diagonal entries.
template <typename Derived>
typename Derived::Scalar ss_offdiagonal(const Eigen::MatrixBase<Derived>& m) {
  return m.squaredNorm() - m.diagonal().squaredNorm();
}

}  // namespace ffd
