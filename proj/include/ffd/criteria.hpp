#pragma once

#include <array>
#include <compare>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ffd/design.hpp"
#include "ffd/model_space.hpp"
#include "ffd/rational.hpp"

namespace ffd {

/// Effects of the model matrix in column order: intercept (the empty set),
/// the m main effects, then the pairs of F and the triples of G.
std::vector<SubsetIndex> model_effects(int m, const ModelPair& mp);

/// X_{F,G}(d) = [1 | X(d) | Y_F(d) | Z_G(d)].
template <typename Scalar = int>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> model_matrix(const Design& d, const ModelPair& mp) {
  const auto effects = model_effects(d.factors(), mp);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> x(d.runs(), static_cast<Eigen::Index>(effects.size()));
  for (std::size_t c = 0; c < effects.size(); ++c)
    x.col(static_cast<Eigen::Index>(c)) = d.column_product<Scalar>(effects[c]);
  return x;
}

/// M_{F,G}(d) = X'X / n held as the integer matrix n M, whose (A, B) entry is
/// j_{A^B}(d). Symmetric with unit diagonal.
class InformationMatrix {
 public:
  InformationMatrix(std::vector<SubsetIndex> effects, Eigen::MatrixXi scaled, int runs);

  int order() const { return static_cast<int>(effects_.size()); }
  int runs() const { return runs_; }
  const std::vector<SubsetIndex>& effects() const { return effects_; }
  /// n M, entries in [-n, n].
  const Eigen::MatrixXi& scaled() const { return scaled_; }
  Rational operator()(int r, int c) const { return Rational(scaled_(r, c), runs_); }

  /// M itself with the requested scalar (Rational for exact work).
  template <typename Scalar>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> as() const {
    return scaled_.cast<Scalar>() / Scalar(runs_);
  }

 private:
  std::vector<SubsetIndex> effects_;
  Eigen::MatrixXi scaled_;
  int runs_;
};

InformationMatrix information_matrix(const JVector& j, const ModelPair& mp);
InformationMatrix information_matrix(const Design& d, const ModelPair& mp);

/// Sum over i != j of M_ij^2, exact.
Rational ss_offdiagonal(const InformationMatrix& m);

/// det M, exact (fraction-free elimination on n M, then divided by n^p).
Rational determinant(const InformationMatrix& m);

enum class CriterionKind { Sf0, SFg, S31 };

/// Multipliers a_1..a_6 with S^2 = sum_s a_s B_s(d).
struct CriterionCoefficients {
  CriterionKind kind;
  int m = 0;
  int f = 0;
  int g = 0;
  std::array<Rational, 6> a;

  /// a_s, one-based.
  const Rational& operator()(int s) const { return a[static_cast<std::size_t>(s - 1)]; }
  std::string label() const;
};

/// Uniform f-subset of the pairs, no triples. Requires m >= 2, 0 <= f <= F.
CriterionCoefficients coefficients_sf0(int m, int f);
/// All pairs active, uniform g-subset of the triples. Requires m >= 3, 0 <= g <= G.
CriterionCoefficients coefficients_sFg(int m, int g);
/// One active triple with its three pairs, triple uniform. Requires m >= 3.
CriterionCoefficients coefficients_s31(int m);

/// The model distribution whose expected off-diagonal sum of squares the
/// coefficients express.
ModelDistribution matching_distribution(const CriterionCoefficients& c);

enum class Provenance { ClosedForm, Oracle };
std::string to_string(Provenance p);

struct CriterionValue {
  Rational value;
  std::string criterion;
  Provenance provenance;
};

Rational closed_form_s2(const BsSpectrum& b, const CriterionCoefficients& c);
CriterionValue closed_form_s2(const Design& d, const CriterionCoefficients& c);

/// E_p[ss_offdiagonal(M_{F,G}(d))] by streaming the support of p. Ground truth
/// for every closed form. Workers split the support; the sum is exact, so the
/// result does not depend on the split.
CriterionValue s2_oracle(const Design& d, const ModelDistribution& dist, int workers = 1);

/// The expectation split by information-matrix block, both orders of each
/// off-diagonal block counted (so the fields add up to the oracle value).
struct S2Terms {
  Rational intercept_main;
  Rational main_main;
  Rational intercept_pairs;
  Rational main_pairs;
  Rational pairs_pairs;
  Rational intercept_triples;
  Rational main_triples;
  Rational pairs_triples;
  Rational triples_triples;

  Rational total() const;
};

S2Terms s2_terms(const Design& d, const ModelDistribution& dist);

inline constexpr int kMaxDeterminantOrder = 30;

/// E_p[det M_{F,G}(d)], exact. Throws when the support is empty or an
/// information matrix would exceed kMaxDeterminantOrder.
Rational d_fg(const Design& d, const ModelDistribution& dist, int workers = 1);

/// Lexicographic comparison of (B_1, ..., B_m); `less` means smaller
/// aberration (better). Throws on mismatched m.
std::strong_ordering gma_compare(const BsSpectrum& a, const BsSpectrum& b);
std::strong_ordering gma_compare(const Design& a, const Design& b);

struct PropositionFinding {
  int proposition = 0;  ///< 1: S^2_{f,0}, 2: S^2_{F,g}, 3: S^2_{3,1}
  int m = 0;
  int parameter = 0;  ///< f, g, or 0 for S^2_{3,1}
  std::string detail;
};

struct PropositionReport {
  int checked = 0;
  std::vector<PropositionFinding> violations;
  /// Equalities at f = F or g = G where the strict ordering degenerates.
  std::vector<PropositionFinding> boundary_equalities;

  bool holds() const { return violations.empty(); }
  void merge(const PropositionReport& other);
};

/// Ordering of the coefficients:
///   1. a_1 > a_2 > a_3 > a_4 for S^2_{f,0}, m > 3, 1 <= f < F;
///   2. a_1 > ... > a_6 for S^2_{F,g}, m > 5, 1 <= g < G;
///   3. a_2 > a_1 > a_3 > a_4 for S^2_{3,1}, m > 3.
/// Checks each proposition whose range contains m.
PropositionReport check_proposition_orderings(int m);
PropositionReport check_proposition(int proposition, int m_lo, int m_hi);

}  // namespace ffd
