#include "ffd/criteria.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <thread>

#include "ffd/determinant.hpp"

namespace ffd {

std::vector<SubsetIndex> model_effects(int m, const ModelPair& mp) {
  std::vector<SubsetIndex> effects;
  effects.reserve(static_cast<std::size_t>(1 + m + mp.f() + mp.g()));
  effects.push_back(SubsetIndex{});
  for (int i = 0; i < m; ++i) effects.push_back(SubsetIndex::single(i));
  effects.insert(effects.end(), mp.pairs().begin(), mp.pairs().end());
  effects.insert(effects.end(), mp.triples().begin(), mp.triples().end());
  return effects;
}

InformationMatrix::InformationMatrix(std::vector<SubsetIndex> effects, Eigen::MatrixXi scaled, int runs)
    : effects_(std::move(effects)), scaled_(std::move(scaled)), runs_(runs) {
  if (scaled_.rows() != order() || scaled_.cols() != order())
    throw std::invalid_argument("InformationMatrix: shape does not match effect list");
}

InformationMatrix information_matrix(const JVector& j, const ModelPair& mp) {
  if (mp.support().bits() >> j.factors())
    throw std::invalid_argument("information_matrix: model uses factors beyond m");
  auto effects = model_effects(j.factors(), mp);
  const auto p = static_cast<Eigen::Index>(effects.size());
  Eigen::MatrixXi scaled(p, p);
  for (Eigen::Index r = 0; r < p; ++r)
    for (Eigen::Index c = r; c < p; ++c)
      scaled(r, c) = scaled(c, r) =
          j[effects[static_cast<std::size_t>(r)] ^ effects[static_cast<std::size_t>(c)]];
  return InformationMatrix(std::move(effects), std::move(scaled), j.runs());
}

InformationMatrix information_matrix(const Design& d, const ModelPair& mp) {
  return information_matrix(j_vector(d), mp);
}

namespace {

std::int64_t scaled_ss_offdiagonal(const Eigen::MatrixXi& s) {
  std::int64_t total = 0;
  for (Eigen::Index r = 0; r < s.rows(); ++r)
    for (Eigen::Index c = 0; c < s.cols(); ++c)
      if (r != c) total += std::int64_t{s(r, c)} * s(r, c);
  return total;
}

// k(k-1) / (N(N-1)), zero when fewer than two members are drawn.
Rational pair_draw_ratio(long long k, long long total) {
  if (k < 2) return 0;
  return Rational(k * (k - 1), total * (total - 1));
}

}  // namespace

Rational ss_offdiagonal(const InformationMatrix& m) {
  return Rational(scaled_ss_offdiagonal(m.scaled()), std::int64_t{m.runs()} * m.runs());
}

Rational determinant(const InformationMatrix& m) {
  const BigInt det = bareiss_determinant(m.scaled());
  const BigInt scale = boost::multiprecision::pow(BigInt(m.runs()), static_cast<unsigned>(m.order()));
  return Rational(det, scale);
}

std::string CriterionCoefficients::label() const {
  switch (kind) {
    case CriterionKind::Sf0: return "sf0:f=" + std::to_string(f);
    case CriterionKind::SFg: return "sFg:g=" + std::to_string(g);
    case CriterionKind::S31: return "s31";
  }
  return "?";
}

CriterionCoefficients coefficients_sf0(int m, int f) {
  if (m < 2) throw std::invalid_argument("sf0 requires m >= 2");
  const auto counts = ScenarioCounts::make(m, f, 0);
  const long long F = counts.pair_total();
  const Rational both = pair_draw_ratio(f, F);
  CriterionCoefficients c{CriterionKind::Sf0, m, f, 0, {}};
  c.a[0] = 2 * (1 + Rational(f * (m - 1LL), F));
  c.a[1] = 2 * (1 + Rational(f, F) + both * (m - 2));
  c.a[2] = Rational(6LL * f, F);
  c.a[3] = 6 * both;
  return c;
}

CriterionCoefficients coefficients_sFg(int m, int g) {
  if (m < 3) throw std::invalid_argument("sFg requires m >= 3");
  const auto counts = ScenarioCounts::make(m, 0, g);
  const long long G = counts.triple_total();
  const Rational one = Rational(g, G);
  const Rational both = pair_draw_ratio(g, G);
  CriterionCoefficients c{CriterionKind::SFg, m, static_cast<int>(counts.pair_total()), g, {}};
  c.a[0] = 2 * m + one * ((m - 1LL) * (m - 2));
  c.a[1] = 2 * m + 2 * one * (m - 2) + both * ((m - 2LL) * (m - 3));
  c.a[2] = 6 + 2 * one + 6 * one * (m - 3);
  c.a[3] = 6 + 8 * one + 6 * both * (m - 4);
  c.a[4] = 20 * one;
  c.a[5] = 20 * both;
  return c;
}

CriterionCoefficients coefficients_s31(int m) {
  if (m < 3) throw std::invalid_argument("s31 requires m >= 3");
  const long long G = ScenarioCounts::make(m, 3, 1).triple_total();
  CriterionCoefficients c{CriterionKind::S31, m, 3, 1, {}};
  c.a[0] = 2 * (1 + Rational(9, m));
  // Intercept, main-effect and pair-pair blocks each see a pair of U with
  // probability (m-2)/G per pair, on top of the 2 B_2 of X'X.
  c.a[1] = 2 + Rational(6 * (m - 2LL), G);
  c.a[2] = Rational(2 * (3LL * m - 5), G);
  c.a[3] = Rational(8, G);
  return c;
}

ModelDistribution matching_distribution(const CriterionCoefficients& c) {
  switch (c.kind) {
    case CriterionKind::Sf0: return ModelDistribution::uniform_pairs(c.m, c.f);
    case CriterionKind::SFg: return ModelDistribution::all_pairs_uniform_triples(c.m, c.g);
    case CriterionKind::S31: return ModelDistribution::hierarchical_31(c.m);
  }
  throw std::logic_error("unknown criterion kind");
}

std::string to_string(Provenance p) { return p == Provenance::ClosedForm ? "closed-form" : "oracle"; }

Rational closed_form_s2(const BsSpectrum& b, const CriterionCoefficients& c) {
  if (b.factors() != c.m)
    throw std::invalid_argument("closed_form_s2: coefficients for m = " + std::to_string(c.m) +
                                " applied to a design with m = " + std::to_string(b.factors()));
  Rational total = 0;
  for (int s = 1; s <= std::min(6, b.factors()); ++s) total += c(s) * b[s];
  return total;
}

CriterionValue closed_form_s2(const Design& d, const CriterionCoefficients& c) {
  return {closed_form_s2(bs_spectrum(d), c), c.label(), Provenance::ClosedForm};
}

namespace {

// Runs body(partition) on `workers` threads and sums the partial results in
// partition order.
template <typename Body>
Rational reduce_over_partitions(int workers, Body body) {
  workers = std::max(1, workers);
  std::vector<Rational> partial(static_cast<std::size_t>(workers));
  if (workers == 1) {
    partial[0] = body(Partition{0, 1});
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        partial[static_cast<std::size_t>(w)] =
            body(Partition{static_cast<std::size_t>(w), static_cast<std::size_t>(workers)});
      });
    for (auto& t : pool) t.join();
  }
  Rational total = 0;
  for (const auto& r : partial) total += r;
  return total;
}

void require_nonempty(const ModelDistribution& dist) {
  if (dist.support_size() == 0) throw std::invalid_argument("model distribution has empty support");
}

}  // namespace

CriterionValue s2_oracle(const Design& d, const ModelDistribution& dist, int workers) {
  require_nonempty(dist);
  if (dist.factors() != d.factors())
    throw std::invalid_argument("s2_oracle: distribution is for m = " + std::to_string(dist.factors()) +
                                ", design has m = " + std::to_string(d.factors()));
  const JVector j = j_vector(d);
  const std::int64_t n2 = std::int64_t{d.runs()} * d.runs();

  Rational value = reduce_over_partitions(workers, [&](Partition part) {
    // Uniform supports share one weight; batch the integer sums per weight.
    Rational total = 0;
    Rational weight = 0;
    BigInt batch = 0;
    dist.for_each(
        [&](const ModelPair& mp, const Rational& w) {
          if (w != weight) {
            total += weight * Rational(batch, n2);
            weight = w;
            batch = 0;
          }
          batch += scaled_ss_offdiagonal(information_matrix(j, mp).scaled());
        },
        part);
    total += weight * Rational(batch, n2);
    return total;
  });
  return {value, dist.label(), Provenance::Oracle};
}

Rational S2Terms::total() const {
  return intercept_main + main_main + intercept_pairs + main_pairs + pairs_pairs + intercept_triples +
         main_triples + pairs_triples + triples_triples;
}

S2Terms s2_terms(const Design& d, const ModelDistribution& dist) {
  require_nonempty(dist);
  const JVector j = j_vector(d);
  const int m = d.factors();
  // block index: 0 intercept, 1 main, 2 pairs, 3 triples
  std::array<std::array<Rational, 4>, 4> acc{};
  dist.for_each([&](const ModelPair& mp, const Rational& w) {
    const auto effects = model_effects(m, mp);
    auto block = [&](std::size_t i) {
      if (i == 0) return 0;
      if (i <= static_cast<std::size_t>(m)) return 1;
      if (i <= static_cast<std::size_t>(m + mp.f())) return 2;
      return 3;
    };
    std::array<std::array<std::int64_t, 4>, 4> sums{};
    for (std::size_t r = 0; r < effects.size(); ++r)
      for (std::size_t c = 0; c < effects.size(); ++c) {
        if (r == c) continue;
        const std::int64_t v = j[effects[r] ^ effects[c]];
        const auto br = static_cast<std::size_t>(block(r));
        const auto bc = static_cast<std::size_t>(block(c));
        sums[std::min(br, bc)][std::max(br, bc)] += v * v;
      }
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a; b < 4; ++b)
        if (sums[a][b]) acc[a][b] += w * Rational(sums[a][b], 1);
  });
  const Rational n2(std::int64_t{d.runs()} * d.runs());
  S2Terms t;
  t.intercept_main = acc[0][1] / n2;
  t.main_main = acc[1][1] / n2;
  t.intercept_pairs = acc[0][2] / n2;
  t.main_pairs = acc[1][2] / n2;
  t.pairs_pairs = acc[2][2] / n2;
  t.intercept_triples = acc[0][3] / n2;
  t.main_triples = acc[1][3] / n2;
  t.pairs_triples = acc[2][3] / n2;
  t.triples_triples = acc[3][3] / n2;
  return t;
}

Rational d_fg(const Design& d, const ModelDistribution& dist, int workers) {
  require_nonempty(dist);
  if (dist.factors() != d.factors()) throw std::invalid_argument("d_fg: factor count mismatch");
  if (dist.max_order() > kMaxDeterminantOrder)
    throw std::invalid_argument("d_fg: information matrix order " + std::to_string(dist.max_order()) +
                                " exceeds the cap of " + std::to_string(kMaxDeterminantOrder));
  const JVector j = j_vector(d);
  return reduce_over_partitions(workers, [&](Partition part) {
    Rational total = 0;
    dist.for_each([&](const ModelPair& mp, const Rational& w) { total += w * determinant(information_matrix(j, mp)); },
                  part);
    return total;
  });
}

std::strong_ordering gma_compare(const BsSpectrum& a, const BsSpectrum& b) {
  if (a.factors() != b.factors()) throw std::invalid_argument("gma_compare: designs differ in m");
  for (int s = 1; s <= a.factors(); ++s)
    if (auto c = a[s] <=> b[s]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::strong_ordering gma_compare(const Design& a, const Design& b) {
  return gma_compare(bs_spectrum(a), bs_spectrum(b));
}

void PropositionReport::merge(const PropositionReport& other) {
  checked += other.checked;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  boundary_equalities.insert(boundary_equalities.end(), other.boundary_equalities.begin(),
                             other.boundary_equalities.end());
}

namespace {

// Checks coefficient chain order[0] > order[1] > ... (one-based indices).
void check_chain(const CriterionCoefficients& c, const std::vector<int>& order, int proposition, int parameter,
                 bool boundary, PropositionReport& report) {
  ++report.checked;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const Rational& hi = c(order[k]);
    const Rational& lo = c(order[k + 1]);
    if (hi > lo) continue;
    PropositionFinding finding{proposition, c.m, parameter,
                               "a_" + std::to_string(order[k]) + " = " + hi.str() + (hi == lo ? " == " : " < ") +
                                   "a_" + std::to_string(order[k + 1]) + " = " + lo.str()};
    if (boundary && hi == lo)
      report.boundary_equalities.push_back(std::move(finding));
    else
      report.violations.push_back(std::move(finding));
  }
}

PropositionReport check_one(int proposition, int m) {
  PropositionReport report;
  switch (proposition) {
    case 1: {
      const int F = m * (m - 1) / 2;
      for (int f = 1; f <= F; ++f) check_chain(coefficients_sf0(m, f), {1, 2, 3, 4}, 1, f, f == F, report);
      break;
    }
    case 2: {
      const int G = m * (m - 1) * (m - 2) / 6;
      for (int g = 1; g <= G; ++g)
        check_chain(coefficients_sFg(m, g), {1, 2, 3, 4, 5, 6}, 2, g, g == G, report);
      break;
    }
    case 3: check_chain(coefficients_s31(m), {2, 1, 3, 4}, 3, 0, false, report); break;
    default: throw std::invalid_argument("unknown proposition " + std::to_string(proposition));
  }
  return report;
}

int minimum_m(int proposition) { return proposition == 2 ? 6 : 4; }

}  // namespace

PropositionReport check_proposition(int proposition, int m_lo, int m_hi) {
  if (proposition < 1 || proposition > 3) throw std::invalid_argument("unknown proposition");
  if (m_lo < minimum_m(proposition))
    throw std::invalid_argument("proposition " + std::to_string(proposition) + " is stated for m >= " +
                                std::to_string(minimum_m(proposition)));
  if (m_hi > kMaxFactors) throw std::invalid_argument("m exceeds the factor cap");
  PropositionReport report;
  for (int m = m_lo; m <= m_hi; ++m) report.merge(check_one(proposition, m));
  return report;
}

PropositionReport check_proposition_orderings(int m) {
  PropositionReport report;
  for (int p = 1; p <= 3; ++p)
    if (m >= minimum_m(p)) report.merge(check_one(p, m));
  return report;
}

}  // namespace ffd
