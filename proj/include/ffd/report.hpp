#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ffd/criteria.hpp"
#include "ffd/design.hpp"
#include "ffd/model_space.hpp"
#include "ffd/search.hpp"

namespace ffd {

/// FNV-1a over m and the sorted row codes, as 16 hex digits. Row order does
/// not change the digest.
std::string design_digest(const Design& d);

/// Parses a scenario tag for design with m factors:
///   sf0:f=K  sFg:g=K  s31  consistent:f=K,g=K  g-then-f:f=K,g=K  explicit:PATH
ModelDistribution parse_scenario(std::string_view text, int m);

/// Closed-form coefficients for a scenario tag, or nullopt when the scenario
/// has none.
std::optional<CriterionCoefficients> closed_form_for(std::string_view text, int m);

struct EvalEntry {
  std::string criterion;
  Rational value;
  Provenance provenance = Provenance::ClosedForm;
};

struct EvalReport {
  std::string digest;
  Design design{1, {0}};
  BsSpectrum spectrum;
  std::optional<bool> afd;
  std::optional<int> affine_dimension;
  /// Emit the GMA key (B_1, ..., B_m).
  bool gma = false;
  std::vector<EvalEntry> values;
};

nlohmann::ordered_json to_json(const EvalReport& r);
std::string to_text(const EvalReport& r);

nlohmann::ordered_json to_json(const SearchResult& r, bool timing = true);
std::string to_text(const SearchResult& r, bool timing = true);

/// {"num": "...", "den": "...", "decimal": "..."}
nlohmann::ordered_json exact_json(const Rational& r);

}  // namespace ffd
