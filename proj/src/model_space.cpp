#include "ffd/model_space.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ffd {

ScenarioCounts ScenarioCounts::make(int m, int f, int g) {
  if (m < 1 || m > kMaxFactors) throw std::invalid_argument("scenario: m out of range");
  ScenarioCounts c{m, f, g};
  if (f < 0 || f > c.pair_total())
    throw std::invalid_argument("scenario: f = " + std::to_string(f) + " outside [0, " +
                                std::to_string(c.pair_total()) + "] for m = " + std::to_string(m));
  if (g < 0 || g > c.triple_total())
    throw std::invalid_argument("scenario: g = " + std::to_string(g) + " outside [0, " +
                                std::to_string(c.triple_total()) + "] for m = " + std::to_string(m));
  return c;
}

std::vector<SubsetIndex> all_pairs(int m) {
  std::vector<SubsetIndex> out;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) out.push_back(SubsetIndex::of({a, b}));
  return out;
}

std::vector<SubsetIndex> all_triples(int m) {
  std::vector<SubsetIndex> out;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c) out.push_back(SubsetIndex::of({a, b, c}));
  return out;
}

ModelPair::ModelPair(std::vector<SubsetIndex> pairs, std::vector<SubsetIndex> triples)
    : pairs_(std::move(pairs)), triples_(std::move(triples)) {
  for (auto s : pairs_)
    if (s.size() != 2) throw std::invalid_argument("ModelPair: " + s.str() + " is not a pair");
  for (auto s : triples_)
    if (s.size() != 3) throw std::invalid_argument("ModelPair: " + s.str() + " is not a triple");
  auto has_duplicates = [](std::vector<SubsetIndex> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  if (has_duplicates(pairs_) || has_duplicates(triples_))
    throw std::invalid_argument("ModelPair: repeated interaction");
}

SubsetIndex ModelPair::support() const {
  std::uint32_t bits = 0;
  for (auto s : pairs_) bits |= s.bits();
  for (auto s : triples_) bits |= s.bits();
  return SubsetIndex(bits);
}

std::string ModelPair::str() const {
  std::string out;
  for (auto s : pairs_) out += (out.empty() ? "" : " ") + s.str();
  out += out.empty() ? "|" : " |";
  for (auto s : triples_) out += " " + s.str();
  return out;
}

std::vector<SubsetIndex> implied_pairs(const std::vector<SubsetIndex>& triples) {
  std::vector<SubsetIndex> out;
  for (auto t : triples) {
    std::uint32_t bits = t.bits();
    while (bits) {
      const std::uint32_t low = bits & (~bits + 1);
      out.push_back(SubsetIndex(t.bits() ^ low));
      bits ^= low;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_hierarchically_consistent(const ModelPair& mp) {
  const auto& pairs = mp.pairs();
  for (auto need : implied_pairs(mp.triples()))
    if (std::find(pairs.begin(), pairs.end(), need) == pairs.end()) return false;
  return true;
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::UniformF_gZero: return "UniformF_gZero";
    case Scenario::AllPairs_UniformG: return "AllPairs_UniformG";
    case Scenario::Hierarchical31: return "Hierarchical31";
    case Scenario::UniformConsistent: return "UniformConsistent";
    case Scenario::UniformGThenF: return "UniformGThenF";
    case Scenario::ExplicitWeights: return "ExplicitWeights";
  }
  return "?";
}

namespace {

std::vector<SubsetIndex> pick(const std::vector<SubsetIndex>& from, const std::vector<int>& idx) {
  std::vector<SubsetIndex> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(from[static_cast<std::size_t>(i)]);
  return out;
}

std::uint64_t mask_of(const std::vector<int>& idx) {
  std::uint64_t mask = 0;
  for (int i : idx) mask |= std::uint64_t{1} << i;
  return mask;
}

// Calls visit(pairs, triples) for every hierarchically consistent (F, G) of the
// given sizes, by rejection over all C(F,f) x C(G,g) combinations.
template <typename Visit>
void each_consistent(const ScenarioCounts& c, Visit&& visit) {
  const auto P = all_pairs(c.m);
  const auto Q = all_triples(c.m);
  // Pair-index mask each triple requires; one word suffices while C(m,2) <= 64.
  const bool use_masks = P.size() <= 64;
  std::vector<std::uint64_t> needs(Q.size(), 0);
  if (use_masks)
    for (std::size_t t = 0; t < Q.size(); ++t)
      for (auto need : implied_pairs({Q[t]}))
        needs[t] |= std::uint64_t{1}
                    << (std::find(P.begin(), P.end(), need) - P.begin());
  for_each_combination(static_cast<int>(P.size()), c.f, [&](const std::vector<int>& fi) {
    const std::uint64_t have = use_masks ? mask_of(fi) : 0;
    const auto pairs = pick(P, fi);
    for_each_combination(static_cast<int>(Q.size()), c.g, [&](const std::vector<int>& gi) {
      if (use_masks) {
        for (int t : gi)
          if ((needs[static_cast<std::size_t>(t)] & ~have) != 0) return;
        visit(pairs, pick(Q, gi));
      } else {
        ModelPair mp(pairs, pick(Q, gi));
        if (is_hierarchically_consistent(mp)) visit(mp.pairs(), mp.triples());
      }
    });
  });
}

}  // namespace

ModelDistribution ModelDistribution::uniform_pairs(int m, int f) {
  ModelDistribution d(Scenario::UniformF_gZero, ScenarioCounts::make(m, f, 0));
  d.support_size_ = binomial(static_cast<int>(d.counts_.pair_total()), f);
  return d;
}

ModelDistribution ModelDistribution::all_pairs_uniform_triples(int m, int g) {
  if (m < 2) throw std::invalid_argument("scenario: m must be at least 2");
  auto probe = ScenarioCounts::make(m, 0, g);
  ModelDistribution d(Scenario::AllPairs_UniformG,
                      ScenarioCounts::make(m, static_cast<int>(probe.pair_total()), g));
  d.support_size_ = binomial(static_cast<int>(d.counts_.triple_total()), g);
  return d;
}

ModelDistribution ModelDistribution::hierarchical_31(int m) {
  if (m < 3) throw std::invalid_argument("scenario s31 requires m >= 3");
  ModelDistribution d(Scenario::Hierarchical31, ScenarioCounts::make(m, 3, 1));
  d.support_size_ = d.counts_.triple_total();
  return d;
}

ModelDistribution ModelDistribution::uniform_consistent(int m, int f, int g) {
  ModelDistribution d(Scenario::UniformConsistent, ScenarioCounts::make(m, f, g));
  BigInt count = 0;
  each_consistent(d.counts_, [&](const auto&, const auto&) { ++count; });
  if (count == 0) throw std::invalid_argument("scenario: no hierarchically consistent model pairs");
  d.support_size_ = count;
  return d;
}

ModelDistribution ModelDistribution::uniform_triples_then_pairs(int m, int f, int g) {
  ModelDistribution d(Scenario::UniformGThenF, ScenarioCounts::make(m, f, g));
  const auto Q = all_triples(m);
  const int pair_total = static_cast<int>(d.counts_.pair_total());
  BigInt support = 0;
  bool any = false;
  for_each_combination(static_cast<int>(Q.size()), g, [&](const std::vector<int>& gi) {
    const int required = static_cast<int>(implied_pairs(pick(Q, gi)).size());
    if (required > f) return;
    any = true;
    support += binomial(pair_total - required, f - required);
  });
  if (!any) throw std::invalid_argument("scenario: no triple set admits a consistent pair set");
  d.support_size_ = support;
  return d;
}

ModelDistribution ModelDistribution::explicit_weights(int m, std::vector<WeightedModel> support) {
  if (support.empty()) throw std::invalid_argument("explicit weights: empty support");
  int max_f = 0, max_g = 0;
  Rational total = 0;
  std::set<ModelPair> seen;
  for (auto& wm : support) {
    if (wm.weight.sign() <= 0) throw std::invalid_argument("explicit weights: weights must be positive");
    if (wm.model.support().bits() >> m)
      throw std::invalid_argument("explicit weights: model " + wm.model.str() + " exceeds m");
    if (!seen.insert(wm.model).second)
      throw std::invalid_argument("explicit weights: model " + wm.model.str() + " listed twice");
    max_f = std::max(max_f, wm.model.f());
    max_g = std::max(max_g, wm.model.g());
    total += wm.weight;
  }
  if (total != Rational(1))
    throw std::invalid_argument("explicit weights: weights sum to " + total.str() + ", not 1");
  ModelDistribution d(Scenario::ExplicitWeights, ScenarioCounts::make(m, max_f, max_g));
  d.support_size_ = static_cast<long long>(support.size());
  d.explicit_ = std::move(support);
  return d;
}

std::string ModelDistribution::label() const {
  const auto& c = counts_;
  switch (scenario_) {
    case Scenario::UniformF_gZero: return "sf0:f=" + std::to_string(c.f);
    case Scenario::AllPairs_UniformG: return "sFg:g=" + std::to_string(c.g);
    case Scenario::Hierarchical31: return "s31";
    case Scenario::UniformConsistent:
      return "consistent:f=" + std::to_string(c.f) + ",g=" + std::to_string(c.g);
    case Scenario::UniformGThenF:
      return "g-then-f:f=" + std::to_string(c.f) + ",g=" + std::to_string(c.g);
    case Scenario::ExplicitWeights: return "explicit(" + support_size_.str() + " models)";
  }
  return "?";
}

void ModelDistribution::for_each(const ModelVisitor& visit, Partition part) const {
  if (part.count == 0 || part.index >= part.count) throw std::invalid_argument("bad partition");
  std::size_t serial = 0;
  auto mine = [&] { return (serial++ % part.count) == part.index; };
  const int m = counts_.m;

  switch (scenario_) {
    case Scenario::UniformF_gZero: {
      const auto P = all_pairs(m);
      const Rational w(BigInt(1), support_size_);
      for_each_combination(static_cast<int>(P.size()), counts_.f, [&](const std::vector<int>& fi) {
        if (mine()) visit(ModelPair(pick(P, fi), {}), w);
      });
      return;
    }
    case Scenario::AllPairs_UniformG: {
      const auto P = all_pairs(m);
      const auto Q = all_triples(m);
      const Rational w(BigInt(1), support_size_);
      for_each_combination(static_cast<int>(Q.size()), counts_.g, [&](const std::vector<int>& gi) {
        if (mine()) visit(ModelPair(P, pick(Q, gi)), w);
      });
      return;
    }
    case Scenario::Hierarchical31: {
      const Rational w(BigInt(1), support_size_);
      for (auto u : all_triples(m)) {
        if (!mine()) continue;
        visit(ModelPair(implied_pairs({u}), {u}), w);
      }
      return;
    }
    case Scenario::UniformConsistent: {
      const Rational w(BigInt(1), support_size_);
      each_consistent(counts_, [&](const std::vector<SubsetIndex>& pairs,
                                   const std::vector<SubsetIndex>& triples) {
        if (mine()) visit(ModelPair(pairs, triples), w);
      });
      return;
    }
    case Scenario::UniformGThenF: {
      const auto P = all_pairs(m);
      const auto Q = all_triples(m);
      BigInt feasible = 0;
      for_each_combination(static_cast<int>(Q.size()), counts_.g, [&](const std::vector<int>& gi) {
        if (static_cast<int>(implied_pairs(pick(Q, gi)).size()) <= counts_.f) ++feasible;
      });
      for_each_combination(static_cast<int>(Q.size()), counts_.g, [&](const std::vector<int>& gi) {
        const auto triples = pick(Q, gi);
        const auto required = implied_pairs(triples);
        const int r = static_cast<int>(required.size());
        if (r > counts_.f) return;
        std::vector<SubsetIndex> rest;
        for (auto p : P)
          if (!std::binary_search(required.begin(), required.end(), p)) rest.push_back(p);
        const Rational w(BigInt(1), feasible * binomial(static_cast<int>(rest.size()), counts_.f - r));
        for_each_combination(static_cast<int>(rest.size()), counts_.f - r, [&](const std::vector<int>& ri) {
          if (!mine()) return;
          auto pairs = required;
          for (int i : ri) pairs.push_back(rest[static_cast<std::size_t>(i)]);
          std::sort(pairs.begin(), pairs.end());
          visit(ModelPair(std::move(pairs), triples), w);
        });
      });
      return;
    }
    case Scenario::ExplicitWeights:
      for (const auto& wm : explicit_)
        if (mine()) visit(wm.model, wm.weight);
      return;
  }
}

namespace {

std::vector<SubsetIndex> parse_sets(const std::string& text, int m, int line_no) {
  std::vector<SubsetIndex> out;
  std::size_t pos = 0;
  while (true) {
    pos = text.find_first_not_of(" \t", pos);
    if (pos == std::string::npos) break;
    if (text[pos] != '{') throw ParseError(line_no, "expected '{' in '" + text + "'");
    const auto close = text.find('}', pos);
    if (close == std::string::npos) throw ParseError(line_no, "unterminated '{'");
    std::string body = text.substr(pos + 1, close - pos - 1);
    for (char& c : body)
      if (c == ',') c = ' ';
    std::istringstream items(body);
    std::uint32_t bits = 0;
    int factor;
    while (items >> factor) {
      if (factor < 1 || factor > m)
        throw ParseError(line_no, "factor " + std::to_string(factor) + " outside 1.." + std::to_string(m));
      bits |= 1u << (factor - 1);
    }
    if (!items.eof()) throw ParseError(line_no, "bad factor list '{" + body + "}'");
    out.push_back(SubsetIndex(bits));
    pos = close + 1;
  }
  return out;
}

}  // namespace

ModelDistribution parse_explicit_weights(std::istream& in, int m) {
  std::vector<WeightedModel> support;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(line_no, "missing ':' after weight");
    Rational weight;
    try {
      weight = parse_rational(line.substr(0, colon));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    std::string rest = line.substr(colon + 1);
    std::string pair_text = rest, triple_text;
    if (const auto bar = rest.find('|'); bar != std::string::npos) {
      pair_text = rest.substr(0, bar);
      triple_text = rest.substr(bar + 1);
    }
    try {
      support.push_back({ModelPair(parse_sets(pair_text, m, line_no), parse_sets(triple_text, m, line_no)),
                         weight});
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (support.empty()) throw ParseError(line_no, "no weighted models found");
  return ModelDistribution::explicit_weights(m, std::move(support));
}

}  // namespace ffd
