#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ffd/rational.hpp"

namespace ffd {

inline constexpr int kMaxFactors = 16;

/// One run of a design: bit j is set iff factor j is at level -1.
/// Read as a GF(2) vector this is the image of the run under +1 -> 0, -1 -> 1.
using RowCode = std::uint32_t;

/// A subset S of the factors {0, ..., m-1} as a bitmask.
class SubsetIndex {
 public:
  constexpr SubsetIndex() = default;
  constexpr explicit SubsetIndex(std::uint32_t bits) : bits_(bits) {}
  /// Zero-based factor indices.
  static SubsetIndex of(std::initializer_list<int> factors);
  static constexpr SubsetIndex single(int factor) { return SubsetIndex(1u << factor); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int factor) const { return (bits_ >> factor) & 1u; }
  constexpr bool is_subset_of(SubsetIndex o) const { return (bits_ & ~o.bits_) == 0; }

  /// Symmetric difference; x_S (.) x_T = x_{S^T}.
  friend constexpr SubsetIndex operator^(SubsetIndex a, SubsetIndex b) {
    return SubsetIndex(a.bits_ ^ b.bits_);
  }
  friend constexpr auto operator<=>(SubsetIndex, SubsetIndex) = default;

  /// One-based label such as "{1,2,4}".
  std::string str() const;

 private:
  std::uint32_t bits_ = 0;
};

/// Sign of the product of the S-columns on a run: (-1)^popcount(row & S).
constexpr int character(RowCode row, SubsetIndex s) {
  return (std::popcount(row & s.bits()) & 1) ? -1 : 1;
}

enum class Encoding { PlusMinus, ZeroOne };

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// An n x m two-level design X(d) stored as row codes. Rows form a multiset;
/// order is kept only so files round-trip.
class Design {
 public:
  Design(int factors, std::vector<RowCode> rows);

  /// From a matrix of +-1 levels.
  static Design from_levels(const std::vector<std::vector<int>>& levels);

  int runs() const { return static_cast<int>(rows_.size()); }
  int factors() const { return factors_; }
  std::span<const RowCode> rows() const { return rows_; }
  RowCode row(int i) const { return rows_[static_cast<std::size_t>(i)]; }

  /// x_ij(d), either -1 or +1.
  int level(int run, int factor) const { return ((row(run) >> factor) & 1u) ? -1 : 1; }

  bool has_distinct_rows() const;

  /// X(d) as a dense matrix.
  template <typename Scalar = int>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> x(runs(), factors());
    for (int i = 0; i < runs(); ++i)
      for (int j = 0; j < factors(); ++j) x(i, j) = Scalar(level(i, j));
    return x;
  }

  /// x_S(d), the componentwise product of the columns in S.
  template <typename Scalar = int>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> column_product(SubsetIndex s) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(runs());
    for (int i = 0; i < runs(); ++i) x(i) = Scalar(character(row(i), s));
    return x;
  }

  friend bool operator==(const Design&, const Design&) = default;

 private:
  int factors_;
  std::vector<RowCode> rows_;
};

/// Reads whitespace/comma separated rows; '#' starts a comment line.
/// Throws ParseError carrying the 1-based line number.
Design parse_design(std::istream& in, Encoding encoding = Encoding::PlusMinus);
Design parse_design(std::string_view text, Encoding encoding = Encoding::PlusMinus);

/// One run per line, levels written as 1 / -1 separated by spaces.
std::string format_design(const Design& d);

/// All 2^m runs in row-code order.
Design full_factorial(int factors);

/// j_S(d) for all 2^m subsets, indexed by SubsetIndex bits.
class JVector {
 public:
  JVector(int factors, int runs, std::vector<std::int32_t> values);

  int factors() const { return factors_; }
  int runs() const { return runs_; }
  std::int32_t operator[](SubsetIndex s) const { return values_[s.bits()]; }
  std::span<const std::int32_t> values() const { return values_; }

  /// Inverts the transform: multiplicity of each row code in the design.
  std::vector<std::int32_t> row_counts() const;

 private:
  int factors_;
  int runs_;
  std::vector<std::int32_t> values_;
};

/// In-place unnormalised Walsh-Hadamard transform over a 2^k table.
/// Maps row multiplicities to j_S values (and back, up to a factor 2^k).
template <typename T>
void walsh_hadamard(std::span<T> table) {
  const std::size_t size = table.size();
  for (std::size_t h = 1; h < size; h <<= 1)
    for (std::size_t block = 0; block < size; block += 2 * h)
      for (std::size_t i = block; i < block + h; ++i) {
        const T a = table[i];
        const T b = table[i + h];
        table[i] = a + b;
        table[i + h] = a - b;
      }
}

/// O(n + m 2^m): tally rows, then one Walsh-Hadamard pass.
JVector j_vector(const Design& d);

/// numerators[s] = n^2 B_s(d) = sum over |S| = s of j_S^2, with B_0 = 1.
struct BsSpectrum {
  std::int64_t runs = 0;
  std::vector<std::int64_t> numerators;

  int factors() const { return static_cast<int>(numerators.size()) - 1; }
  std::int64_t denominator() const { return runs * runs; }
  Rational operator[](int s) const {
    return Rational(numerators[static_cast<std::size_t>(s)], denominator());
  }

  friend bool operator==(const BsSpectrum&, const BsSpectrum&) = default;
};

BsSpectrum bs_spectrum(const JVector& j);
BsSpectrum bs_spectrum(const Design& d);

/// j_S(d)/n in lowest terms; equals the indicator-function ratio b_S/b_0.
Rational indicator_ratio(const Design& d, SubsetIndex s);

/// Output column k is input column column_perm[k], negated when bit k of
/// column_signs is set; output run i is input run row_perm[i].
Design transform(const Design& d, std::span<const int> column_perm, RowCode column_signs,
                 std::span<const int> row_perm);

/// Column-only transform (rows kept in order).
Design transform(const Design& d, std::span<const int> column_perm, RowCode column_signs);

/// Image of a single row code under a column permutation and sign mask.
RowCode transform_row(RowCode row, std::span<const int> column_perm, RowCode column_signs);

}  // namespace ffd
