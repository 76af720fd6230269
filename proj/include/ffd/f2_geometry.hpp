#pragma once

#include <cstdint>
#include <vector>

#include "ffd/design.hpp"

namespace ffd {

/// Rows of m-bit vectors over GF(2).
class F2Matrix {
 public:
  F2Matrix(int width, std::vector<std::uint32_t> rows);

  int width() const { return width_; }
  const std::vector<std::uint32_t>& rows() const { return rows_; }

  /// Rank by Gaussian elimination over GF(2).
  int rank() const;

 private:
  int width_;
  std::vector<std::uint32_t> rows_;
};

/// GF(2) image of the design with +1 -> 0, -1 -> 1 (the row codes themselves),
/// repeated runs removed.
F2Matrix f2_image(const Design& d);

/// Dimension of the affine hull of the GF(2)-encoded runs: the rank of the
/// differences r_i - r_1.
int affine_dimension(const Design& d);

/// True iff the runs lie in no affine hyperplane of GF(2)^m.
bool is_affinely_full_dimensional(const Design& d);

/// The j_S characterisation: |j_S(d)| < n for every nonempty S.
bool has_no_full_aliasing(const JVector& j);

}  // namespace ffd
