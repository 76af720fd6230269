#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ffd/design.hpp"
#include "ffd/rational.hpp"

namespace ffd {

/// (m, f, g) with F = C(m,2) two-factor and G = C(m,3) three-factor interactions.
struct ScenarioCounts {
  int m = 0;
  int f = 0;
  int g = 0;

  long long pair_total() const { return static_cast<long long>(m) * (m - 1) / 2; }
  long long triple_total() const { return static_cast<long long>(m) * (m - 1) * (m - 2) / 6; }

  /// Throws std::invalid_argument unless 0 <= f <= F and 0 <= g <= G.
  static ScenarioCounts make(int m, int f, int g);
};

/// All two-subsets of {0..m-1} in lexicographic order ({1,2}, {1,3}, ...).
std::vector<SubsetIndex> all_pairs(int m);
/// All three-subsets in lexicographic order.
std::vector<SubsetIndex> all_triples(int m);

/// Active interactions {F, G}. Members keep the order given; the criteria
/// built on top are invariant to it.
class ModelPair {
 public:
  ModelPair() = default;
  ModelPair(std::vector<SubsetIndex> pairs, std::vector<SubsetIndex> triples);

  const std::vector<SubsetIndex>& pairs() const { return pairs_; }
  const std::vector<SubsetIndex>& triples() const { return triples_; }
  int f() const { return static_cast<int>(pairs_.size()); }
  int g() const { return static_cast<int>(triples_.size()); }

  /// Union of the factors mentioned by any member.
  SubsetIndex support() const;

  /// "{1,2} {1,3} | {1,2,3}"
  std::string str() const;

  friend bool operator==(const ModelPair&, const ModelPair&) = default;
  friend auto operator<=>(const ModelPair&, const ModelPair&) = default;

 private:
  std::vector<SubsetIndex> pairs_;
  std::vector<SubsetIndex> triples_;
};

/// Every active triple has all three of its two-subsets among the active pairs.
bool is_hierarchically_consistent(const ModelPair& mp);

/// Two-subsets required by a set of triples for hierarchical consistency.
std::vector<SubsetIndex> implied_pairs(const std::vector<SubsetIndex>& triples);

enum class Scenario {
  UniformF_gZero,      ///< F uniform over f-subsets of P, G empty.
  AllPairs_UniformG,   ///< F = P, G uniform over g-subsets of Q.
  Hierarchical31,      ///< G = {U} uniform, F = the three pairs inside U.
  UniformConsistent,   ///< Uniform over hierarchically consistent (F, G).
  UniformGThenF,       ///< G uniform over feasible g-sets, then F uniform given G.
  ExplicitWeights,     ///< Arbitrary finite weighted support.
};

std::string to_string(Scenario s);

struct WeightedModel {
  ModelPair model;
  Rational weight;
};

/// Round-robin slice of a support: model number k goes to worker k % count.
struct Partition {
  std::size_t index = 0;
  std::size_t count = 1;
};

using ModelVisitor = std::function<void(const ModelPair&, const Rational&)>;

/// A probability distribution p(F, G) over model pairs. Supports are streamed,
/// never materialised (except for explicit weights, which arrive as a list).
class ModelDistribution {
 public:
  static ModelDistribution uniform_pairs(int m, int f);
  static ModelDistribution all_pairs_uniform_triples(int m, int g);
  static ModelDistribution hierarchical_31(int m);
  /// Rejection over C(F,f) x C(G,g); expensive beyond small m.
  static ModelDistribution uniform_consistent(int m, int f, int g);
  static ModelDistribution uniform_triples_then_pairs(int m, int f, int g);
  /// Weights must be positive and sum to exactly 1.
  static ModelDistribution explicit_weights(int m, std::vector<WeightedModel> support);

  Scenario scenario() const { return scenario_; }
  int factors() const { return counts_.m; }
  /// f and g of the scenario; for explicit weights, the largest f and g present.
  const ScenarioCounts& counts() const { return counts_; }
  /// Number of model pairs with positive weight.
  const BigInt& support_size() const { return support_size_; }
  /// Largest information-matrix order 1 + m + f + g over the support.
  int max_order() const { return 1 + counts_.m + counts_.f + counts_.g; }

  std::string label() const;

  void for_each(const ModelVisitor& visit, Partition part = {}) const;

 private:
  ModelDistribution(Scenario s, ScenarioCounts c) : scenario_(s), counts_(c) {}

  Scenario scenario_;
  ScenarioCounts counts_;
  BigInt support_size_ = 0;
  std::vector<WeightedModel> explicit_;
};

inline void enumerate_models(const ModelDistribution& dist, const ModelVisitor& visit,
                             Partition part = {}) {
  dist.for_each(visit, part);
}

/// Lines of the form `w : {i,j} {k,l} ... | {a,b,c} ...` with one-based
/// factor indices and rational weight w; '#' starts a comment line.
ModelDistribution parse_explicit_weights(std::istream& in, int m);

/// Calls visit(indices) for every k-subset of {0..n-1} in lexicographic order.
template <typename Visit>
void for_each_combination(int n, int k, Visit&& visit) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace ffd
