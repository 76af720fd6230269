#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ffd/f2_geometry.hpp"
#include "ffd/search.hpp"
#include "oracles.hpp"

using namespace ffd;

namespace {

// Rank by brute force: the size of the span is 2^rank.
int span_rank(int width, const std::vector<std::uint32_t>& rows) {
  std::vector<bool> in_span(std::size_t{1} << width, false);
  in_span[0] = true;
  for (auto r : rows) {
    auto next = in_span;
    for (std::size_t x = 0; x < in_span.size(); ++x)
      if (in_span[x]) next[x ^ r] = true;
    in_span = next;
  }
  int size = 0;
  for (bool b : in_span) size += b;
  int rank = 0;
  while ((1 << rank) < size) ++rank;
  return rank;
}

}  // namespace

TEST_CASE("rank of small matrices") {
  CHECK(F2Matrix(3, {0b001, 0b010, 0b100}).rank() == 3);
  CHECK(F2Matrix(3, {0b011, 0b101, 0b110}).rank() == 2);
  CHECK(F2Matrix(3, {0, 0}).rank() == 0);
  CHECK(F2Matrix(4, {}).rank() == 0);
}

TEST_CASE("rank agrees with span enumeration") {
  std::mt19937 rng(17);
  for (int t = 0; t < 200; ++t) {
    const int w = 1 + t % 8;
    std::vector<std::uint32_t> rows(static_cast<std::size_t>(1 + rng() % 10));
    for (auto& r : rows) r = rng() % (1u << w);
    CHECK(F2Matrix(w, rows).rank() == span_rank(w, rows));
  }
}

TEST_CASE("image removes repeats") {
  const Design d(2, {1, 1, 2, 1});
  CHECK(f2_image(d).rows().size() == 2);
}

TEST_CASE("affine dimension") {
  CHECK(affine_dimension(full_factorial(4)) == 4);
  CHECK(affine_dimension(Design(3, {5})) == 0);
  // x1 = x2 on every run: a hyperplane
  const Design flat = Design::from_levels({{1, 1, 1}, {-1, -1, 1}, {1, 1, -1}, {-1, -1, -1}});
  CHECK(affine_dimension(flat) == 2);
  CHECK_FALSE(is_affinely_full_dimensional(flat));
  CHECK_FALSE(has_no_full_aliasing(j_vector(flat)));
}

TEST_CASE("affine rank and the j-vector test agree on every small design") {
  for (int m = 1; m <= 3; ++m) {
    const std::uint32_t codes = 1u << m;
    for (std::uint32_t subset = 1; subset < (1u << codes); ++subset) {
      std::vector<RowCode> rows;
      for (RowCode x = 0; x < codes; ++x)
        if ((subset >> x) & 1u) rows.push_back(x);
      const Design d(m, rows);
      CHECK(is_affinely_full_dimensional(d) == has_no_full_aliasing(j_vector(d)));
    }
  }
}

TEST_CASE("the characterisation also holds with repeated runs") {
  std::mt19937 rng(23);
  for (int t = 0; t < 300; ++t) {
    const Design d = oracle::random_rows(2 + t % 5, 1 + t % 14, rng);
    CHECK(is_affinely_full_dimensional(d) == has_no_full_aliasing(j_vector(d)));
  }
}

TEST_CASE("reference designs are full-dimensional") {
  CHECK(is_affinely_full_dimensional(oracle::table1()));
  int count = 0;
  for_each_hadamard_design(5, [&](const Design& d) {
    CHECK(is_affinely_full_dimensional(d));
    ++count;
  });
  CHECK(count == 462);
}
