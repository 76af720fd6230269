#include "ffd/f2_geometry.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

namespace ffd {

F2Matrix::F2Matrix(int width, std::vector<std::uint32_t> rows) : width_(width), rows_(std::move(rows)) {
  if (width < 0 || width > 32) throw std::invalid_argument("F2Matrix: width out of range");
  const std::uint64_t limit = std::uint64_t{1} << width;
  for (auto r : rows_)
    if (r >= limit) throw std::invalid_argument("F2Matrix: row wider than matrix");
}

int F2Matrix::rank() const {
  // Basis indexed by leading bit.
  std::uint32_t basis[32] = {};
  int rank = 0;
  for (std::uint32_t v : rows_) {
    while (v) {
      const int lead = 31 - std::countl_zero(v);
      if (!basis[lead]) {
        basis[lead] = v;
        ++rank;
        break;
      }
      v ^= basis[lead];
    }
  }
  return rank;
}

F2Matrix f2_image(const Design& d) {
  std::vector<std::uint32_t> rows(d.rows().begin(), d.rows().end());
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return F2Matrix(d.factors(), std::move(rows));
}

int affine_dimension(const Design& d) {
  const F2Matrix image = f2_image(d);
  std::vector<std::uint32_t> differences;
  const auto& rows = image.rows();
  for (std::size_t i = 1; i < rows.size(); ++i) differences.push_back(rows[i] ^ rows[0]);
  return F2Matrix(d.factors(), std::move(differences)).rank();
}

bool is_affinely_full_dimensional(const Design& d) { return affine_dimension(d) == d.factors(); }

bool has_no_full_aliasing(const JVector& j) {
  const auto values = j.values();
  for (std::size_t s = 1; s < values.size(); ++s)
    if (std::abs(values[s]) >= j.runs()) return false;
  return true;
}

}  // namespace ffd
