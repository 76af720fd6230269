#include "ffd/design.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <sstream>

namespace ffd {

SubsetIndex SubsetIndex::of(std::initializer_list<int> factors) {
  std::uint32_t bits = 0;
  for (int f : factors) {
    if (f < 0 || f >= kMaxFactors) throw std::out_of_range("SubsetIndex: factor out of range");
    bits |= 1u << f;
  }
  return SubsetIndex(bits);
}

std::string SubsetIndex::str() const {
  std::string out = "{";
  bool first = true;
  for (int j = 0; j < 32; ++j) {
    if (!contains(j)) continue;
    if (!first) out += ",";
    out += std::to_string(j + 1);
    first = false;
  }
  return out + "}";
}

Design::Design(int factors, std::vector<RowCode> rows) : factors_(factors), rows_(std::move(rows)) {
  if (factors < 1 || factors > kMaxFactors)
    throw std::invalid_argument("Design: factor count must be in [1, " +
                                std::to_string(kMaxFactors) + "]");
  if (rows_.empty()) throw std::invalid_argument("Design: at least one run is required");
  const RowCode limit = RowCode{1} << factors;
  for (RowCode r : rows_)
    if (r >= limit) throw std::invalid_argument("Design: row code has bits above factor count");
}

Design Design::from_levels(const std::vector<std::vector<int>>& levels) {
  if (levels.empty()) throw std::invalid_argument("Design: no runs");
  const int m = static_cast<int>(levels.front().size());
  std::vector<RowCode> rows;
  rows.reserve(levels.size());
  for (const auto& run : levels) {
    if (static_cast<int>(run.size()) != m) throw std::invalid_argument("Design: ragged rows");
    RowCode code = 0;
    for (int j = 0; j < m; ++j) {
      if (run[static_cast<std::size_t>(j)] == -1)
        code |= RowCode{1} << j;
      else if (run[static_cast<std::size_t>(j)] != 1)
        throw std::invalid_argument("Design: levels must be -1 or +1");
    }
    rows.push_back(code);
  }
  return Design(m, std::move(rows));
}

bool Design::has_distinct_rows() const {
  std::vector<RowCode> sorted(rows_);
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

Design parse_design(std::istream& in, Encoding encoding) {
  std::vector<RowCode> rows;
  int width = -1;
  int first_data_line = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    for (char& c : line)
      if (c == ',' || c == '\t') c = ' ';
    std::istringstream tokens(line);
    std::string tok;
    RowCode code = 0;
    int col = 0;
    while (tokens >> tok) {
      int level;
      if (encoding == Encoding::PlusMinus) {
        if (tok == "1" || tok == "+1")
          level = 1;
        else if (tok == "-1")
          level = -1;
        else
          throw ParseError(line_no, "token '" + tok + "' is not one of +1, 1, -1");
      } else {
        if (tok == "1")
          level = 1;
        else if (tok == "0")
          level = -1;
        else
          throw ParseError(line_no, "token '" + tok + "' is not one of 0, 1");
      }
      if (col >= kMaxFactors)
        throw ParseError(line_no, "more than " + std::to_string(kMaxFactors) + " factors");
      if (level == -1) code |= RowCode{1} << col;
      ++col;
    }
    if (width < 0) {
      width = col;
      first_data_line = line_no;
    } else if (col != width) {
      throw ParseError(line_no, "row has " + std::to_string(col) + " columns, line " +
                                    std::to_string(first_data_line) + " has " +
                                    std::to_string(width));
    }
    rows.push_back(code);
  }
  if (rows.empty()) throw ParseError(line_no, "no design rows found");
  return Design(width, std::move(rows));
}

Design parse_design(std::string_view text, Encoding encoding) {
  std::istringstream in{std::string(text)};
  return parse_design(in, encoding);
}

std::string format_design(const Design& d) {
  std::string out;
  for (int i = 0; i < d.runs(); ++i) {
    for (int j = 0; j < d.factors(); ++j) {
      if (j) out += ' ';
      out += d.level(i, j) == 1 ? " 1" : "-1";
    }
    out += '\n';
  }
  return out;
}

Design full_factorial(int factors) {
  if (factors < 1 || factors > kMaxFactors) throw std::invalid_argument("full_factorial: bad m");
  std::vector<RowCode> rows(std::size_t{1} << factors);
  std::iota(rows.begin(), rows.end(), RowCode{0});
  return Design(factors, std::move(rows));
}

JVector::JVector(int factors, int runs, std::vector<std::int32_t> values)
    : factors_(factors), runs_(runs), values_(std::move(values)) {
  if (values_.size() != (std::size_t{1} << factors))
    throw std::invalid_argument("JVector: table size must be 2^m");
}

std::vector<std::int32_t> JVector::row_counts() const {
  std::vector<std::int32_t> counts(values_);
  walsh_hadamard(std::span<std::int32_t>(counts));
  for (auto& c : counts) c >>= factors_;
  return counts;
}

JVector j_vector(const Design& d) {
  std::vector<std::int32_t> table(std::size_t{1} << d.factors(), 0);
  for (RowCode r : d.rows()) ++table[r];
  walsh_hadamard(std::span<std::int32_t>(table));
  return JVector(d.factors(), d.runs(), std::move(table));
}

BsSpectrum bs_spectrum(const JVector& j) {
  BsSpectrum b;
  b.runs = j.runs();
  b.numerators.assign(static_cast<std::size_t>(j.factors()) + 1, 0);
  const auto values = j.values();
  for (std::size_t s = 0; s < values.size(); ++s) {
    const std::int64_t v = values[s];
    b.numerators[static_cast<std::size_t>(std::popcount(static_cast<std::uint32_t>(s)))] += v * v;
  }
  return b;
}

BsSpectrum bs_spectrum(const Design& d) { return bs_spectrum(j_vector(d)); }

Rational indicator_ratio(const Design& d, SubsetIndex s) {
  if (s.empty()) throw std::invalid_argument("indicator_ratio: S must be nonempty");
  if (s.bits() >> d.factors()) throw std::invalid_argument("indicator_ratio: S exceeds factors");
  std::int64_t sum = 0;
  for (RowCode r : d.rows()) sum += character(r, s);
  return Rational(sum, d.runs());
}

namespace {

void check_permutation(std::span<const int> perm, int size, const char* what) {
  if (static_cast<int>(perm.size()) != size)
    throw std::invalid_argument(std::string("transform: ") + what + " has wrong length");
  std::vector<char> seen(static_cast<std::size_t>(size), 0);
  for (int p : perm) {
    if (p < 0 || p >= size || seen[static_cast<std::size_t>(p)])
      throw std::invalid_argument(std::string("transform: ") + what + " is not a permutation");
    seen[static_cast<std::size_t>(p)] = 1;
  }
}

}  // namespace

RowCode transform_row(RowCode row, std::span<const int> column_perm, RowCode column_signs) {
  RowCode out = 0;
  for (std::size_t k = 0; k < column_perm.size(); ++k)
    out |= ((row >> column_perm[k]) & 1u) << k;
  return out ^ column_signs;
}

Design transform(const Design& d, std::span<const int> column_perm, RowCode column_signs) {
  std::vector<int> identity(static_cast<std::size_t>(d.runs()));
  std::iota(identity.begin(), identity.end(), 0);
  return transform(d, column_perm, column_signs, identity);
}

Design transform(const Design& d, std::span<const int> column_perm, RowCode column_signs,
                 std::span<const int> row_perm) {
  check_permutation(column_perm, d.factors(), "column permutation");
  check_permutation(row_perm, d.runs(), "row permutation");
  if (column_signs >> d.factors()) throw std::invalid_argument("transform: sign mask too wide");
  std::vector<RowCode> rows;
  rows.reserve(static_cast<std::size_t>(d.runs()));
  for (int i : row_perm) rows.push_back(transform_row(d.row(i), column_perm, column_signs));
  return Design(d.factors(), std::move(rows));
}

}  // namespace ffd
