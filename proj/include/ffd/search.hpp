#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ffd/criteria.hpp"
#include "ffd/design.hpp"
#include "ffd/rational.hpp"

namespace ffd {

inline constexpr int kMaxCanonicalFactors = 8;

/// Minimal sorted row-code sequence over all column permutations and column
/// sign flips. Row order is already factored out by sorting.
struct CanonicalForm {
  int factors = 0;
  std::vector<RowCode> rows;

  Design design() const { return Design(factors, rows); }
  /// Row codes as hex digits, e.g. "00 03 05 ...".
  std::string str() const;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

/// Throws std::invalid_argument when m > kMaxCanonicalFactors.
CanonicalForm canonicalize(const Design& d);

/// A criterion independent of m: "sf0:f=K", "sFg:g=K" or "s31".
struct CriterionSpec {
  CriterionKind kind = CriterionKind::S31;
  int f = 0;
  int g = 0;

  static CriterionSpec parse(std::string_view text);
  std::string label() const;
  CriterionCoefficients coefficients(int m) const;
};

enum class SearchMethod { Exhaustive, Exchange };
std::string to_string(SearchMethod m);

struct SearchConfig {
  int runs = 12;
  int factors = 5;
  CriterionSpec criterion;
  SearchMethod method = SearchMethod::Exchange;
  bool distinct_rows = true;
  int restarts = 100;
  std::uint64_t seed = 1;
  /// A swap is accepted only if it lowers the criterion by more than this.
  Rational improvement_tolerance = 0;
  /// Exhaustive search refuses spaces whose estimated canonical class count
  /// exceeds this, unless long_running is set.
  double space_bound = 1e4;
  bool long_running = false;
  int workers = 1;
};

struct SearchResult {
  std::string criterion;
  SearchMethod method = SearchMethod::Exchange;
  Rational value;
  /// One witness per tied optimal class, in canonical order.
  std::vector<Design> best;
  std::vector<CanonicalForm> classes;
  /// Exhaustive: canonical designs evaluated. Exchange: swap evaluations.
  std::uint64_t visited = 0;
  /// Exchange: restarts that ended at the optimum value.
  int optimum_hits = 0;
  std::vector<std::string> trace;
  double seconds = 0;
};

/// n runs drawn uniformly: a uniform n-subset of the 2^m codes when distinct,
/// independent uniform codes otherwise.
Design random_design(int factors, int runs, bool distinct, std::mt19937_64& rng);

/// C(2^m, n) / (m! 2^m) for distinct rows; the multiset count otherwise.
double estimated_canonical_classes(const SearchConfig& cfg);

/// Orderly generation: extends sorted run sequences one run at a time and
/// prunes every prefix that is not its own canonical form, so each class is
/// visited once. Returns every class at the exact minimum.
SearchResult exhaustive_search(const SearchConfig& cfg);

/// Random-restart row exchange with strict exact improvement. Deterministic
/// for a given seed regardless of worker count.
SearchResult exchange_search(const SearchConfig& cfg);

SearchResult run_search(const SearchConfig& cfg);

/// Paley type-I Hadamard matrix of order q + 1 for a prime q = 3 (mod 4),
/// normalised so the first column is all ones. Verifies H'H = (q+1) I.
Eigen::MatrixXi paley_hadamard(int q);

/// Calls visit for each of the C(11, m) designs formed by m non-constant
/// columns of the order-12 Paley matrix.
void for_each_hadamard_design(int m, const std::function<void(const Design&)>& visit);
std::vector<Design> hadamard_designs(int m);

}  // namespace ffd
