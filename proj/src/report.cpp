#include "ffd/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ffd {

namespace {

struct TagFields {
  std::optional<int> f;
  std::optional<int> g;
};

int parse_count(std::string_view text, std::string_view whole) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string_view::npos || text.size() > 6)
    throw std::invalid_argument("bad count in scenario '" + std::string(whole) + "'");
  return std::stoi(std::string(text));
}

// "f=2,g=1" and the like.
TagFields parse_fields(std::string_view body, std::string_view whole) {
  TagFields out;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const auto item = body.substr(0, comma);
    if (item.size() < 3 || item[1] != '=')
      throw std::invalid_argument("bad scenario field in '" + std::string(whole) + "'");
    const int value = parse_count(item.substr(2), whole);
    if (item[0] == 'f') out.f = value;
    else if (item[0] == 'g') out.g = value;
    else throw std::invalid_argument("unknown scenario field in '" + std::string(whole) + "'");
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
  }
  return out;
}

int require(const std::optional<int>& v, char name, std::string_view whole) {
  if (!v) throw std::invalid_argument(std::string("scenario '") + std::string(whole) + "' needs " + name + "=K");
  return *v;
}

nlohmann::ordered_json rows_json(const Design& d) {
  auto rows = nlohmann::ordered_json::array();
  for (int i = 0; i < d.runs(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int j = 0; j < d.factors(); ++j) row.push_back(d.level(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string design_digest(const Design& d) {
  std::vector<RowCode> rows(d.rows().begin(), d.rows().end());
  std::sort(rows.begin(), rows.end());
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](std::uint32_t word) {
    for (int b = 0; b < 4; ++b) {
      h ^= (word >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  };
  mix(static_cast<std::uint32_t>(d.factors()));
  for (RowCode r : rows) mix(r);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ModelDistribution parse_scenario(std::string_view text, int m) {
  if (text == "s31") return ModelDistribution::hierarchical_31(m);
  if (text.starts_with("explicit:")) {
    const std::string path(text.substr(9));
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open weights file '" + path + "'");
    return parse_explicit_weights(in, m);
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("unknown scenario '" + std::string(text) + "'");
  const auto tag = text.substr(0, colon);
  const auto fields = parse_fields(text.substr(colon + 1), text);
  if (tag == "sf0") return ModelDistribution::uniform_pairs(m, require(fields.f, 'f', text));
  if (tag == "sFg") return ModelDistribution::all_pairs_uniform_triples(m, require(fields.g, 'g', text));
  if (tag == "consistent")
    return ModelDistribution::uniform_consistent(m, require(fields.f, 'f', text), require(fields.g, 'g', text));
  if (tag == "g-then-f")
    return ModelDistribution::uniform_triples_then_pairs(m, require(fields.f, 'f', text),
                                                         require(fields.g, 'g', text));
  throw std::invalid_argument("unknown scenario '" + std::string(text) + "'");
}

std::optional<CriterionCoefficients> closed_form_for(std::string_view text, int m) {
  if (text == "s31" || text.starts_with("sf0:") || text.starts_with("sFg:"))
    return CriterionSpec::parse(text).coefficients(m);
  return std::nullopt;
}

nlohmann::ordered_json exact_json(const Rational& r) {
  return {{"num", r.numerator().str()}, {"den", r.denominator().str()}, {"decimal", to_decimal(r, 6)}};
}

nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json out;
  out["kind"] = "eval";
  out["digest"] = r.digest;
  out["runs"] = r.design.runs();
  out["factors"] = r.design.factors();
  out["design"] = rows_json(r.design);
  if (!r.spectrum.numerators.empty()) {
    auto b = nlohmann::ordered_json::array();
    for (int s = 0; s <= r.spectrum.factors(); ++s) b.push_back(exact_json(r.spectrum[s]));
    out["bs"] = std::move(b);
  }
  if (r.gma) {
    auto key = nlohmann::ordered_json::array();
    for (int s = 1; s <= r.spectrum.factors(); ++s) key.push_back(r.spectrum[s].str());
    out["gma_key"] = std::move(key);
  }
  if (r.afd) out["afd"] = *r.afd;
  if (r.affine_dimension) out["affine_dimension"] = *r.affine_dimension;
  auto values = nlohmann::ordered_json::array();
  for (const auto& v : r.values) {
    nlohmann::ordered_json e;
    e["criterion"] = v.criterion;
    e["provenance"] = to_string(v.provenance);
    e["value"] = exact_json(v.value);
    values.push_back(std::move(e));
  }
  out["criteria"] = std::move(values);
  return out;
}

std::string to_text(const EvalReport& r) {
  std::ostringstream out;
  out << "design " << r.digest << "  n = " << r.design.runs() << ", m = " << r.design.factors() << "\n";
  if (!r.spectrum.numerators.empty()) {
    out << "B_s spectrum\n";
    for (int s = 0; s <= r.spectrum.factors(); ++s)
      out << "  B_" << pad(std::to_string(s), 3) << pad(to_decimal(r.spectrum[s], 6), 12) << r.spectrum[s] << "\n";
  }
  if (r.gma) {
    out << "GMA key (";
    for (int s = 1; s <= r.spectrum.factors(); ++s) out << (s > 1 ? ", " : "") << r.spectrum[s];
    out << ")\n";
  }
  if (r.afd) out << "affinely full-dimensional: " << (*r.afd ? "yes" : "no");
  if (r.affine_dimension) out << " (affine dimension " << *r.affine_dimension << ")";
  if (r.afd || r.affine_dimension) out << "\n";
  for (const auto& v : r.values)
    out << pad(v.criterion, 28) << pad(to_decimal(v.value, 6), 12) << pad(v.value.str(), 16) << "["
        << to_string(v.provenance) << "]\n";
  return out.str();
}

nlohmann::ordered_json to_json(const SearchResult& r, bool timing) {
  nlohmann::ordered_json out;
  out["kind"] = "search";
  out["criterion"] = r.criterion;
  out["method"] = to_string(r.method);
  out["value"] = exact_json(r.value);
  out["visited"] = r.visited;
  if (r.method == SearchMethod::Exchange) out["optimum_hits"] = r.optimum_hits;
  auto best = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.best.size(); ++i) {
    nlohmann::ordered_json e;
    e["canonical_form"] = r.classes[i].str();
    e["rows"] = rows_json(r.best[i]);
    best.push_back(std::move(e));
  }
  out["best"] = std::move(best);
  out["trace"] = r.trace;
  if (timing) out["seconds"] = r.seconds;
  return out;
}

std::string to_text(const SearchResult& r, bool timing) {
  std::ostringstream out;
  out << "criterion " << r.criterion << " (" << to_string(r.method) << ")\n";
  out << "best value " << to_decimal(r.value, 6) << " = " << r.value << "\n";
  out << "visited " << r.visited;
  if (r.method == SearchMethod::Exchange) out << ", restarts at optimum " << r.optimum_hits;
  out << "\n";
  out << r.classes.size() << " optimal class" << (r.classes.size() == 1 ? "" : "es") << "\n";
  for (std::size_t i = 0; i < r.best.size(); ++i) {
    out << "class " << i + 1 << ": " << r.classes[i].str() << "\n" << format_design(r.best[i]);
  }
  if (timing) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
    out << "wall time " << buf << " s\n";
  }
  return out.str();
}

}  // namespace ffd
