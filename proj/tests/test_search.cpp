#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ffd/search.hpp"
#include "oracles.hpp"

using namespace ffd;

namespace {

SearchConfig config(int n, int m, const char* criterion, SearchMethod method) {
  SearchConfig cfg;
  cfg.runs = n;
  cfg.factors = m;
  cfg.criterion = CriterionSpec::parse(criterion);
  cfg.method = method;
  return cfg;
}

// Minimum closed-form value over every n-subset of the 2^m codes.
Rational brute_force_minimum(int m, int n, const CriterionCoefficients& c) {
  const std::uint32_t codes = 1u << m;
  std::optional<Rational> best;
  for (std::uint32_t subset = 0; subset < (1u << codes); ++subset) {
    if (__builtin_popcount(subset) != n) continue;
    std::vector<RowCode> rows;
    for (RowCode x = 0; x < codes; ++x)
      if ((subset >> x) & 1u) rows.push_back(x);
    const auto b = oracle::bs_direct(Design(m, rows));
    Rational v = 0;
    for (int s = 1; s <= m && s <= 6; ++s) v += c(s) * b[static_cast<std::size_t>(s)];
    if (!best || v < *best) best = v;
  }
  return *best;
}

}  // namespace

TEST_CASE("criterion specs") {
  CHECK(CriterionSpec::parse("sf0:f=3").f == 3);
  CHECK(CriterionSpec::parse("sFg:g=2").kind == CriterionKind::SFg);
  CHECK(CriterionSpec::parse("s31").label() == "s31");
  CHECK(CriterionSpec::parse("sf0:f=4").label() == "sf0:f=4");
  CHECK_THROWS_AS(CriterionSpec::parse("sf0:f="), std::invalid_argument);
  CHECK_THROWS_AS(CriterionSpec::parse("sf0:f=x"), std::invalid_argument);
  CHECK_THROWS_AS(CriterionSpec::parse("d-opt"), std::invalid_argument);
}

TEST_CASE("canonical form is idempotent and orbit-invariant") {
  std::mt19937 rng(101);
  for (int t = 0; t < 100; ++t) {
    const Design d = oracle::random_distinct(5, 12, rng);
    std::vector<int> perm{0, 1, 2, 3, 4};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> rows(12);
    std::iota(rows.begin(), rows.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    const Design e = transform(d, perm, static_cast<RowCode>(rng() % 32), rows);
    const CanonicalForm c = canonicalize(d);
    CHECK(canonicalize(e) == c);
    CHECK(canonicalize(c.design()) == c);
  }
}

TEST_CASE("canonical form is the orbit minimum") {
  std::mt19937 rng(5);
  for (int t = 0; t < 10; ++t) {
    const Design d = oracle::random_rows(3, 5, rng);
    std::vector<RowCode> rows(d.rows().begin(), d.rows().end());
    const auto orbit = oracle::orbit(3, rows);
    CHECK(canonicalize(d).rows == *orbit.begin());
  }
}

TEST_CASE("full factorial is a fixed point") {
  const Design ff = full_factorial(4);
  CHECK(canonicalize(ff).rows == std::vector<RowCode>(ff.rows().begin(), ff.rows().end()));
  CHECK_THROWS_AS(canonicalize(full_factorial(9)), std::invalid_argument);
}

TEST_CASE("distinct designs separated by the canonical form") {
  const Design t1 = oracle::table1();
  const Design h = hadamard_designs(5).front();
  CHECK(canonicalize(t1) != canonicalize(h));
}

TEST_CASE("orderly generation finds one representative per orbit") {
  for (const auto& [m, n] : {std::pair{2, 3}, std::pair{3, 3}, std::pair{3, 4}, std::pair{3, 5}, std::pair{4, 5}}) {
    auto cfg = config(n, m, "sf0:f=0", SearchMethod::Exhaustive);
    cfg.criterion = CriterionSpec::parse(m >= 3 ? "s31" : "sf0:f=1");
    const auto r = exhaustive_search(cfg);
    CHECK(r.visited == static_cast<std::uint64_t>(oracle::orbit_count(m, n)));
  }
}

TEST_CASE("the only four-run two-factor design is the full factorial") {
  const auto r = exhaustive_search(config(4, 2, "sf0:f=1", SearchMethod::Exhaustive));
  CHECK(r.value == 0);
  REQUIRE(r.classes.size() == 1);
  CHECK(r.visited == 1);
  CHECK(canonicalize(r.best.front()) == canonicalize(full_factorial(2)));
}

TEST_CASE("exhaustive minimum at n = 12, m = 4 agrees with brute force") {
  for (const char* c : {"sf0:f=1", "s31"}) {
    const auto r = exhaustive_search(config(12, 4, c, SearchMethod::Exhaustive));
    const Rational brute = brute_force_minimum(4, 12, CriterionSpec::parse(c).coefficients(4));
    CHECK(r.value == brute);
    for (const auto& d : r.best)
      CHECK(s2_oracle(d, matching_distribution(CriterionSpec::parse(c).coefficients(4))).value == r.value);
  }
  CHECK(exhaustive_search(config(12, 4, "sf0:f=1", SearchMethod::Exhaustive)).value == Rational(4, 9));
  CHECK(exhaustive_search(config(12, 4, "s31", SearchMethod::Exhaustive)).value == Rational(4, 3));
}

TEST_CASE("replicated runs enlarge the space") {
  auto cfg = config(6, 3, "s31", SearchMethod::Exhaustive);
  const auto distinct = exhaustive_search(cfg);
  cfg.distinct_rows = false;
  const auto replicated = exhaustive_search(cfg);
  CHECK(replicated.visited > distinct.visited);
  CHECK(replicated.value <= distinct.value);
}

TEST_CASE("exhaustive worker split does not change the result") {
  auto cfg = config(8, 4, "sf0:f=2", SearchMethod::Exhaustive);
  const auto one = exhaustive_search(cfg);
  cfg.workers = 3;
  const auto three = exhaustive_search(cfg);
  CHECK(one.value == three.value);
  CHECK(one.classes == three.classes);
  CHECK(one.visited == three.visited);
}

TEST_CASE("space bound") {
  auto cfg = config(12, 5, "s31", SearchMethod::Exhaustive);
  CHECK(estimated_canonical_classes(cfg) > 1e4);
  CHECK_THROWS_AS(exhaustive_search(cfg), std::invalid_argument);
  cfg = config(20, 4, "s31", SearchMethod::Exhaustive);
  CHECK_THROWS_AS(exhaustive_search(cfg), std::invalid_argument);
}

TEST_CASE("exchange is deterministic and independent of workers") {
  auto cfg = config(12, 5, "sf0:f=2", SearchMethod::Exchange);
  cfg.restarts = 12;
  cfg.seed = 99;
  const auto a = exchange_search(cfg);
  const auto b = exchange_search(cfg);
  cfg.workers = 4;
  const auto c = exchange_search(cfg);
  CHECK(a.value == b.value);
  CHECK(a.classes == b.classes);
  CHECK(a.trace == b.trace);
  CHECK(a.visited == b.visited);
  CHECK(a.trace == c.trace);
  CHECK(a.classes == c.classes);
}

TEST_CASE("exchange never beats the exhaustive minimum") {
  for (const char* c : {"sf0:f=1", "sf0:f=3", "s31"}) {
    auto cfg = config(12, 4, c, SearchMethod::Exhaustive);
    const auto exact = exhaustive_search(cfg);
    cfg.method = SearchMethod::Exchange;
    cfg.restarts = 20;
    const auto heuristic = exchange_search(cfg);
    CHECK(heuristic.value >= exact.value);
    CHECK(heuristic.optimum_hits >= 1);
  }
}

TEST_CASE("a positive tolerance stops earlier or at the same place") {
  auto cfg = config(12, 5, "s31", SearchMethod::Exchange);
  cfg.restarts = 5;
  const auto strict = exchange_search(cfg);
  cfg.improvement_tolerance = Rational(1, 2);
  const auto loose = exchange_search(cfg);
  CHECK(loose.value >= strict.value);
  cfg.improvement_tolerance = Rational(-1);
  CHECK_THROWS(exchange_search(cfg));
}

TEST_CASE("infeasible configurations") {
  CHECK_THROWS_AS(exchange_search(config(40, 5, "s31", SearchMethod::Exchange)), std::invalid_argument);
  CHECK_THROWS_AS(exchange_search(config(12, 2, "s31", SearchMethod::Exchange)), std::invalid_argument);
  CHECK_THROWS_AS(exchange_search(config(12, 9, "s31", SearchMethod::Exchange)), std::invalid_argument);
}

TEST_CASE("Paley construction") {
  const Eigen::MatrixXi h = paley_hadamard(11);
  CHECK(h.transpose() * h == 12 * Eigen::MatrixXi::Identity(12, 12));
  CHECK((h.col(0).array() == 1).all());
  CHECK(paley_hadamard(7).rows() == 8);
  CHECK_THROWS(paley_hadamard(13));
  CHECK_THROWS(paley_hadamard(15));
}

TEST_CASE("Hadamard-column designs") {
  int count = 0;
  for_each_hadamard_design(5, [&](const Design& d) {
    const auto b = bs_spectrum(d);
    CHECK(b[1] == 0);
    CHECK(b[2] == 0);
    CHECK(b[3] == Rational(10, 9));
    CHECK(b[4] == Rational(5, 9));
    ++count;
  });
  CHECK(count == 462);
  CHECK(hadamard_designs(11).size() == 1);
  CHECK_THROWS(hadamard_designs(12));
}

TEST_CASE("full enumeration at n = 12, m = 5") {
  auto cfg = config(12, 5, "s31", SearchMethod::Exhaustive);
  cfg.long_running = true;
  const auto r = exhaustive_search(cfg);
  // orbit count of 12-subsets of {0,1}^5 under the 3840-element group, by Burnside's lemma
  CHECK(r.visited == 65664);
  CHECK(r.value == Rational(16, 9));
  REQUIRE(r.classes.size() == 1);
  CHECK(r.classes.front() == canonicalize(oracle::table1()));
}
