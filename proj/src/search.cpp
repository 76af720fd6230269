#include "ffd/search.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace ffd {

namespace {

// Column permutations x column sign flips acting on row codes. Element k is
// (permutation k >> m, sign mask k & (2^m - 1)); element 0 is the identity.
class ColumnGroup {
 public:
  explicit ColumnGroup(int m) : m_(m) {
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    do perms_.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    if (m <= kTabulatedFactors) {
      const std::size_t codes = std::size_t{1} << m;
      table_.resize(size() * codes);
      for (std::size_t k = 0; k < size(); ++k)
        for (RowCode r = 0; r < codes; ++r) table_[(k << m) | r] = static_cast<std::uint8_t>(compute(k, r));
    }
  }

  std::size_t size() const { return perms_.size() << m_; }

  RowCode apply(std::size_t k, RowCode row) const {
    if (!table_.empty()) return table_[(k << m_) | row];
    return compute(k, row);
  }

 private:
  static constexpr int kTabulatedFactors = 6;

  RowCode compute(std::size_t k, RowCode row) const {
    return transform_row(row, perms_[k >> m_], static_cast<RowCode>(k & ((std::size_t{1} << m_) - 1)));
  }

  int m_;
  std::vector<std::vector<int>> perms_;
  std::vector<std::uint8_t> table_;
};

const ColumnGroup& column_group(int m) {
  static std::mutex mutex;
  static std::array<std::unique_ptr<ColumnGroup>, kMaxCanonicalFactors + 1> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[static_cast<std::size_t>(m)];
  if (!slot) slot = std::make_unique<ColumnGroup>(m);
  return *slot;
}

void check_canonical_factors(int m) {
  if (m > kMaxCanonicalFactors)
    throw std::invalid_argument("canonical forms are limited to m <= " + std::to_string(kMaxCanonicalFactors) +
                                " (group enumerated directly)");
}

// True iff the sorted run sequence equals its canonical form.
bool is_canonical(const ColumnGroup& group, std::span<const RowCode> sorted, std::vector<RowCode>& scratch) {
  scratch.resize(sorted.size());
  for (std::size_t k = 1; k < group.size(); ++k) {
    for (std::size_t i = 0; i < sorted.size(); ++i) scratch[i] = group.apply(k, sorted[i]);
    std::sort(scratch.begin(), scratch.end());
    if (std::lexicographical_compare(scratch.begin(), scratch.end(), sorted.begin(), sorted.end())) return false;
  }
  return true;
}

// Same test for a set of distinct runs held as a 64-bit membership mask. For
// equal-size sets, sorted-sequence order puts first the set owning the lowest
// element of the symmetric difference.
bool is_canonical_set(const ColumnGroup& group, std::span<const RowCode> sorted, std::uint64_t mask) {
  for (std::size_t k = 1; k < group.size(); ++k) {
    std::uint64_t image = 0;
    for (RowCode r : sorted) image |= std::uint64_t{1} << group.apply(k, r);
    const std::uint64_t diff = image ^ mask;
    if (diff && (image & diff & (~diff + 1))) return false;
  }
  return true;
}

// Integer form of a closed-form criterion: score = sum_S w_|S| j_S^2 with
// value = score / (scale n^2).
struct IntegerCriterion {
  std::array<std::int64_t, 7> weight{};  // indexed by |S|
  BigInt scale = 1;

  explicit IntegerCriterion(const CriterionCoefficients& c) {
    for (const auto& a : c.a) scale = boost::multiprecision::lcm(scale, a.denominator());
    for (int s = 1; s <= 6; ++s) {
      const BigInt w = c(s).numerator() * (scale / c(s).denominator());
      if (w > BigInt(1) << 40) throw std::overflow_error("criterion weights too large for the fast path");
      weight[static_cast<std::size_t>(s)] = w.convert_to<std::int64_t>();
    }
  }

  std::int64_t score(std::span<const std::int32_t> j) const {
    std::int64_t total = 0;
    for (std::size_t s = 1; s < j.size(); ++s) {
      const int size = std::popcount(static_cast<std::uint32_t>(s));
      if (size <= 6) total += weight[static_cast<std::size_t>(size)] * std::int64_t{j[s]} * j[s];
    }
    return total;
  }

  Rational value(std::int64_t score, int runs) const {
    return Rational(BigInt(score), scale * runs * runs);
  }
};

// chi[x << m | S] = (-1)^popcount(x & S)
std::vector<std::int8_t> character_table(int m) {
  const std::size_t codes = std::size_t{1} << m;
  std::vector<std::int8_t> chi(codes * codes);
  for (RowCode x = 0; x < codes; ++x)
    for (std::uint32_t s = 0; s < codes; ++s)
      chi[(x << m) | s] = static_cast<std::int8_t>(character(x, SubsetIndex(s)));
  return chi;
}

void check_config(const SearchConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("search: runs must be positive");
  if (cfg.factors < 1 || cfg.factors > kMaxCanonicalFactors)
    throw std::invalid_argument("search: factors must be in 1.." + std::to_string(kMaxCanonicalFactors));
  if (cfg.distinct_rows && cfg.runs > (1 << cfg.factors))
    throw std::invalid_argument("search: " + std::to_string(cfg.runs) + " distinct runs do not exist for m = " +
                                std::to_string(cfg.factors));
  if (cfg.improvement_tolerance.sign() < 0) throw std::invalid_argument("search: negative tolerance");
  if (cfg.workers < 1) throw std::invalid_argument("search: workers must be positive");
}

std::string fixed(const Rational& r) { return to_fixed(r, 6); }

// Keeps the minimum score and every class attaining it.
struct OptimumSet {
  bool any = false;
  std::int64_t score = 0;
  std::map<CanonicalForm, Design> classes;
  int hits = 0;

  void offer(std::int64_t s, const CanonicalForm& form, const Design& witness) {
    if (!any || s < score) {
      any = true;
      score = s;
      classes.clear();
      hits = 0;
    }
    if (s == score) {
      ++hits;
      classes.emplace(form, witness);
    }
  }
};

void finish(SearchResult& result, const OptimumSet& opt, const IntegerCriterion& crit,
            const CriterionCoefficients& coeffs, int runs) {
  if (!opt.any) throw std::logic_error("search visited no designs");
  result.value = crit.value(opt.score, runs);
  result.optimum_hits = opt.hits;
  for (const auto& [form, witness] : opt.classes) {
    if (closed_form_s2(witness, coeffs).value != result.value)
      throw std::logic_error("search: reported value does not match re-evaluation");
    result.classes.push_back(form);
    result.best.push_back(witness);
  }
}

template <typename Body>
void run_workers(int workers, Body body) {
  if (workers <= 1) {
    body(0);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back([&, w] { body(w); });
  for (auto& t : pool) t.join();
}

}  // namespace

std::string CanonicalForm::str() const {
  std::string out;
  char buf[16];
  for (RowCode r : rows) {
    std::snprintf(buf, sizeof buf, "%02x", static_cast<unsigned>(r));
    out += (out.empty() ? "" : " ") + std::string(buf);
  }
  return out;
}

CanonicalForm canonicalize(const Design& d) {
  check_canonical_factors(d.factors());
  const ColumnGroup& group = column_group(d.factors());
  std::vector<RowCode> best(d.rows().begin(), d.rows().end());
  std::sort(best.begin(), best.end());
  std::vector<RowCode> image(best.size());
  for (std::size_t k = 1; k < group.size(); ++k) {
    for (std::size_t i = 0; i < image.size(); ++i) image[i] = group.apply(k, d.row(static_cast<int>(i)));
    std::sort(image.begin(), image.end());
    if (image < best) best.swap(image);
  }
  return CanonicalForm{d.factors(), std::move(best)};
}

CriterionSpec CriterionSpec::parse(std::string_view text) {
  auto number_after = [&](std::string_view prefix) {
    const std::string digits(text.substr(prefix.size()));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad criterion '" + std::string(text) + "'");
    return std::stoi(digits);
  };
  if (text == "s31") return {CriterionKind::S31, 3, 1};
  if (text.starts_with("sf0:f=")) return {CriterionKind::Sf0, number_after("sf0:f="), 0};
  if (text.starts_with("sFg:g=")) return {CriterionKind::SFg, 0, number_after("sFg:g=")};
  throw std::invalid_argument("unknown criterion '" + std::string(text) + "' (expected sf0:f=K, sFg:g=K or s31)");
}

std::string CriterionSpec::label() const {
  switch (kind) {
    case CriterionKind::Sf0: return "sf0:f=" + std::to_string(f);
    case CriterionKind::SFg: return "sFg:g=" + std::to_string(g);
    case CriterionKind::S31: return "s31";
  }
  return "?";
}

CriterionCoefficients CriterionSpec::coefficients(int m) const {
  switch (kind) {
    case CriterionKind::Sf0: return coefficients_sf0(m, f);
    case CriterionKind::SFg: return coefficients_sFg(m, g);
    case CriterionKind::S31: return coefficients_s31(m);
  }
  throw std::logic_error("unknown criterion kind");
}

Design random_design(int factors, int runs, bool distinct, std::mt19937_64& rng) {
  if (factors < 1 || factors > kMaxFactors || runs < 1) throw std::invalid_argument("random_design: bad size");
  const RowCode codes = RowCode{1} << factors;
  if (distinct && static_cast<RowCode>(runs) > codes)
    throw std::invalid_argument("random_design: too many distinct runs");
  std::vector<RowCode> rows;
  if (distinct) {
    // partial Fisher-Yates over the code table
    std::vector<RowCode> pool(codes);
    std::iota(pool.begin(), pool.end(), RowCode{0});
    for (RowCode i = 0; i < static_cast<RowCode>(runs); ++i) {
      std::swap(pool[i], pool[i + rng() % (codes - i)]);
      rows.push_back(pool[i]);
    }
  } else {
    for (int i = 0; i < runs; ++i) rows.push_back(static_cast<RowCode>(rng() % codes));
  }
  return Design(factors, std::move(rows));
}

std::string to_string(SearchMethod m) { return m == SearchMethod::Exhaustive ? "exhaustive" : "exchange"; }

double estimated_canonical_classes(const SearchConfig& cfg) {
  const double codes = std::ldexp(1.0, cfg.factors);
  double group = std::ldexp(1.0, cfg.factors);
  for (int i = 2; i <= cfg.factors; ++i) group *= i;
  // log C(N, k) through lgamma to stay finite for large spaces
  const double top = cfg.distinct_rows ? codes : codes + cfg.runs - 1;
  const double log_count = std::lgamma(top + 1) - std::lgamma(cfg.runs + 1.0) - std::lgamma(top - cfg.runs + 1);
  return std::exp(log_count) / group;
}

SearchResult exhaustive_search(const SearchConfig& cfg) {
  check_config(cfg);
  const double estimate = estimated_canonical_classes(cfg);
  if (estimate > cfg.space_bound && !cfg.long_running) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "exhaustive search space is about %.3g canonical classes (bound %.3g); "
                  "pass the long-running flag to proceed",
                  estimate, cfg.space_bound);
    throw std::invalid_argument(buf);
  }
  const auto start = std::chrono::steady_clock::now();
  const int m = cfg.factors;
  const int n = cfg.runs;
  const RowCode codes = RowCode{1} << m;
  const auto coeffs = cfg.criterion.coefficients(m);
  const IntegerCriterion crit(coeffs);
  const ColumnGroup& group = column_group(m);
  const auto chi = character_table(m);
  const bool set_test = cfg.distinct_rows && m <= 6;
  const int split_depth = std::min(n, 3);

  std::vector<OptimumSet> optima(static_cast<std::size_t>(cfg.workers));
  std::vector<std::uint64_t> leaves(optima.size(), 0), nodes(optima.size(), 0);

  run_workers(cfg.workers, [&](int worker) {
    std::vector<RowCode> rows;
    std::vector<RowCode> scratch;
    std::vector<std::int32_t> j(codes, 0);
    std::uint64_t mask = 0;
    std::uint64_t split_serial = 0;
    auto& opt = optima[static_cast<std::size_t>(worker)];

    auto push = [&](RowCode x) {
      rows.push_back(x);
      mask |= std::uint64_t{1} << (x & 63);
      const std::int8_t* row_chi = &chi[static_cast<std::size_t>(x) << m];
      for (RowCode s = 0; s < codes; ++s) j[s] += row_chi[s];
    };
    auto pop = [&] {
      const RowCode x = rows.back();
      rows.pop_back();
      if (cfg.distinct_rows) mask &= ~(std::uint64_t{1} << (x & 63));
      const std::int8_t* row_chi = &chi[static_cast<std::size_t>(x) << m];
      for (RowCode s = 0; s < codes; ++s) j[s] -= row_chi[s];
    };

    auto extend = [&](auto&& self) -> void {
      const int depth = static_cast<int>(rows.size());
      if (depth == n) {
        ++leaves[static_cast<std::size_t>(worker)];
        const CanonicalForm form{m, rows};
        opt.offer(crit.score(j), form, form.design());
        return;
      }
      const RowCode first = rows.empty() ? 0 : rows.back() + (cfg.distinct_rows ? 1 : 0);
      for (RowCode x = first; x < codes; ++x) {
        if (cfg.distinct_rows && static_cast<int>(codes - x) < n - depth) break;
        push(x);
        const bool canonical =
            set_test ? is_canonical_set(group, rows, mask) : is_canonical(group, rows, scratch);
        bool mine = true;
        if (canonical && depth + 1 == split_depth)
          mine = (split_serial++ % static_cast<std::uint64_t>(cfg.workers)) == static_cast<std::uint64_t>(worker);
        if (canonical && mine) {
          ++nodes[static_cast<std::size_t>(worker)];
          self(self);
        }
        pop();
      }
    };
    extend(extend);
  });

  OptimumSet merged;
  for (const auto& opt : optima)
    if (opt.any)
      for (const auto& [form, witness] : opt.classes) merged.offer(opt.score, form, witness);

  SearchResult result;
  result.criterion = coeffs.label();
  result.method = SearchMethod::Exhaustive;
  finish(result, merged, crit, coeffs, n);
  result.visited = std::accumulate(leaves.begin(), leaves.end(), std::uint64_t{0});
  result.trace.push_back("canonical prefixes expanded: " +
                         std::to_string(std::accumulate(nodes.begin(), nodes.end(), std::uint64_t{0})));
  result.trace.push_back("canonical designs evaluated: " + std::to_string(result.visited));
  result.trace.push_back("optimal classes: " + std::to_string(result.classes.size()));
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SearchResult exchange_search(const SearchConfig& cfg) {
  check_config(cfg);
  if (cfg.restarts < 1) throw std::invalid_argument("search: restarts must be positive");
  const auto start = std::chrono::steady_clock::now();
  const int m = cfg.factors;
  const int n = cfg.runs;
  const RowCode codes = RowCode{1} << m;
  const auto coeffs = cfg.criterion.coefficients(m);
  const IntegerCriterion crit(coeffs);
  const auto chi = character_table(m);
  const BigInt tolerance_big = [&] {
    const Rational scaled = cfg.improvement_tolerance * Rational(crit.scale * n * n);
    return BigInt(scaled.numerator() / scaled.denominator());
  }();
  if (tolerance_big > BigInt(1) << 60) throw std::invalid_argument("search: tolerance too large");
  const std::int64_t tolerance = tolerance_big.convert_to<std::int64_t>();

  struct Outcome {
    std::int64_t score = 0;
    std::vector<RowCode> rows;
    int swaps = 0;
    std::int64_t start_score = 0;
    std::uint64_t evaluations = 0;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(cfg.restarts));

  run_workers(cfg.workers, [&](int worker) {
    std::vector<std::int32_t> j(codes), trial(codes);
    for (int r = worker; r < cfg.restarts; r += cfg.workers) {
      Outcome& out = outcomes[static_cast<std::size_t>(r)];
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);

      const Design current = random_design(m, n, cfg.distinct_rows, rng);
      std::vector<RowCode> rows(current.rows().begin(), current.rows().end());
      std::vector<int> in_design(codes, 0);
      for (RowCode x : rows) ++in_design[x];

      const JVector initial = j_vector(current);
      std::copy(initial.values().begin(), initial.values().end(), j.begin());
      std::int64_t score = crit.score(j);
      out.start_score = score;

      while (true) {
        std::int64_t best = score;
        int best_pos = -1;
        RowCode best_code = 0;
        for (int i = 0; i < n; ++i) {
          const RowCode old = rows[static_cast<std::size_t>(i)];
          const std::int8_t* old_chi = &chi[static_cast<std::size_t>(old) << m];
          for (RowCode c = 0; c < codes; ++c) {
            if (c == old || (cfg.distinct_rows && in_design[c])) continue;
            const std::int8_t* new_chi = &chi[static_cast<std::size_t>(c) << m];
            for (RowCode s = 0; s < codes; ++s) trial[s] = j[s] - old_chi[s] + new_chi[s];
            ++out.evaluations;
            const std::int64_t candidate = crit.score(trial);
            if (best - candidate > tolerance && candidate < best) {
              best = candidate;
              best_pos = i;
              best_code = c;
            }
          }
        }
        if (best_pos < 0) break;

        RowCode& slot = rows[static_cast<std::size_t>(best_pos)];
        const std::int8_t* old_chi = &chi[static_cast<std::size_t>(slot) << m];
        const std::int8_t* new_chi = &chi[static_cast<std::size_t>(best_code) << m];
        for (RowCode s = 0; s < codes; ++s) j[s] += new_chi[s] - old_chi[s];
        --in_design[slot];
        ++in_design[best_code];
        slot = best_code;
        score = best;
        ++out.swaps;

        const JVector fresh = j_vector(Design(m, rows));
        if (!std::equal(fresh.values().begin(), fresh.values().end(), j.begin()) ||
            crit.score(fresh.values()) != score)
          throw std::logic_error("exchange: incremental j-vector update diverged from recomputation");
      }
      out.score = score;
      out.rows = rows;
    }
  });

  OptimumSet opt;
  SearchResult result;
  result.criterion = coeffs.label();
  result.method = SearchMethod::Exchange;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const auto& out = outcomes[r];
    const Design witness(m, out.rows);
    opt.offer(out.score, canonicalize(witness), witness);
    result.visited += out.evaluations;
    result.trace.push_back("restart " + std::to_string(r) + ": " + fixed(crit.value(out.start_score, n)) + " -> " +
                           fixed(crit.value(out.score, n)) + " after " + std::to_string(out.swaps) + " swaps");
  }
  finish(result, opt, crit, coeffs, n);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SearchResult run_search(const SearchConfig& cfg) {
  return cfg.method == SearchMethod::Exhaustive ? exhaustive_search(cfg) : exchange_search(cfg);
}

}  // namespace ffd
