#include "ffd/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "ffd/criteria.hpp"
#include "ffd/design.hpp"
#include "ffd/f2_geometry.hpp"
#include "ffd/report.hpp"
#include "ffd/search.hpp"

namespace ffd::cli {

namespace {

// Usage problems detected after CLI11 has accepted the flags.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_workers() {
  if (const char* env = std::getenv("FFD_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
    throw UsageError("FFD_WORKERS must be a positive integer");
  }
  return 1;
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("bad range '" + text + "' (expected A..B)");
  }
}

Design load_design(const std::string& path, bool zero_one) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open design file '" + path + "'");
  return parse_design(in, zero_one ? Encoding::ZeroOne : Encoding::PlusMinus);
}

void emit(std::ostream& out, const nlohmann::ordered_json& doc) { out << doc.dump(2) << "\n"; }

// ---------------------------------------------------------------- eval

struct EvalOptions {
  std::string file;
  std::vector<std::string> criteria{"bs", "afd"};
  bool zero_one = false;
  std::string format = "text";
  int workers = 0;
};

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  const Design d = load_design(o.file, o.zero_one);
  EvalReport report;
  report.digest = design_digest(d);
  report.design = d;
  const int workers = o.workers > 0 ? o.workers : default_workers();
  for (const auto& c : expand_criteria(o.criteria)) {
    if (c == "bs") {
      report.spectrum = bs_spectrum(d);
    } else if (c == "gma") {
      report.spectrum = bs_spectrum(d);
      report.gma = true;
    } else if (c == "afd") {
      report.afd = is_affinely_full_dimensional(d);
      report.affine_dimension = affine_dimension(d);
    } else if (c.starts_with("dfg:")) {
      const auto dist = parse_scenario(std::string_view(c).substr(4), d.factors());
      report.values.push_back({"dfg:" + dist.label(), d_fg(d, dist, workers), Provenance::Oracle});
    } else {
      const auto v = closed_form_s2(d, CriterionSpec::parse(c).coefficients(d.factors()));
      report.values.push_back({v.criterion, v.value, v.provenance});
    }
  }
  if (o.format == "json") emit(out, to_json(report));
  else out << to_text(report);
  return kExitOk;
}

// ---------------------------------------------------------------- oracle

struct OracleOptions {
  std::string file;
  std::vector<std::string> scenarios;
  bool zero_one = false;
  std::string format = "text";
  double cap = 5e6;
  int workers = 0;
};

int cmd_oracle(const OracleOptions& o, std::ostream& out) {
  const Design d = load_design(o.file, o.zero_one);
  const int workers = o.workers > 0 ? o.workers : default_workers();
  bool all_equal = true;
  nlohmann::ordered_json doc;
  doc["kind"] = "oracle";
  doc["digest"] = design_digest(d);
  auto results = nlohmann::ordered_json::array();
  for (const auto& s : o.scenarios) {
    const auto dist = parse_scenario(s, d.factors());
    const double support = dist.support_size().convert_to<double>();
    if (support > o.cap) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "scenario %s has %.3g support points (about %.3g matrix entries to form); cap is %.3g",
                    dist.label().c_str(), support, support * dist.max_order() * dist.max_order(), o.cap);
      throw UsageError(buf);
    }
    const auto oracle = s2_oracle(d, dist, workers);
    const auto coeffs = dist.scenario() == Scenario::ExplicitWeights ? std::nullopt : closed_form_for(s, d.factors());
    nlohmann::ordered_json e;
    e["scenario"] = dist.label();
    e["support"] = dist.support_size().str();
    e["oracle"] = exact_json(oracle.value);
    std::string verdict = "ORACLE-ONLY";
    if (coeffs) {
      const Rational closed = closed_form_s2(bs_spectrum(d), *coeffs);
      e["closed_form"] = exact_json(closed);
      verdict = closed == oracle.value ? "EQUAL" : "UNEQUAL";
      all_equal = all_equal && closed == oracle.value;
      if (o.format != "json")
        out << dist.label() << ": closed form " << closed << ", oracle " << oracle.value << " ("
            << to_decimal(oracle.value, 6) << ") " << verdict << "\n";
    } else if (o.format != "json") {
      out << dist.label() << ": oracle " << oracle.value << " (" << to_decimal(oracle.value, 6)
          << "), no closed form\n";
    }
    e["verdict"] = verdict;
    results.push_back(std::move(e));
  }
  doc["results"] = std::move(results);
  if (o.format == "json") emit(out, doc);
  return all_equal ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------- search

struct SearchOptions {
  SearchConfig cfg;
  std::string criterion = "s31";
  std::string method = "exchange";
  std::string tolerance = "0";
  bool replicated = false;
  std::string format = "text";
  bool no_timing = false;
  int workers = 0;
};

int cmd_search(SearchOptions o, std::ostream& out) {
  o.cfg.criterion = CriterionSpec::parse(o.criterion);
  if (o.method == "exhaustive") o.cfg.method = SearchMethod::Exhaustive;
  else if (o.method == "exchange") o.cfg.method = SearchMethod::Exchange;
  else throw UsageError("unknown method '" + o.method + "'");
  o.cfg.improvement_tolerance = parse_rational(o.tolerance);
  o.cfg.distinct_rows = !o.replicated;
  o.cfg.workers = o.workers > 0 ? o.workers : default_workers();
  const SearchResult r = run_search(o.cfg);
  if (o.format == "json") emit(out, to_json(r, !o.no_timing));
  else out << to_text(r, !o.no_timing);
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  bool props = false;
  bool oracle = false;
  bool afd = false;
  std::string m_range = "4..8";
  int samples = 50;
  std::uint64_t seed = 1;
  int exhaustive_m = 3;
  int workers = 0;
};

bool verify_props(const VerifyOptions& o, std::ostream& out) {
  const auto [lo, hi] = parse_range(o.m_range);
  if (lo < 1 || hi < lo || hi > 60) throw UsageError("bad m range '" + o.m_range + "'");
  bool ok = true;
  for (int p = 1; p <= 3; ++p) {
    const int first = std::max(lo, p == 2 ? 6 : 4);
    if (first > hi) {
      out << "proposition " << p << ": m range " << o.m_range << " lies outside its domain, skipped\n";
      continue;
    }
    const auto rep = check_proposition(p, first, hi);
    out << "proposition " << p << " (m = " << first << ".." << hi << "): " << rep.checked << " orderings checked, "
        << rep.violations.size() << " violations, " << rep.boundary_equalities.size() << " boundary equalities\n";
    for (std::size_t i = 0; i < rep.violations.size() && i < 5; ++i)
      out << "  violation m = " << rep.violations[i].m << ": " << rep.violations[i].detail << "\n";
    ok = ok && rep.holds();
  }
  out << "propositions: " << (ok ? "PASS" : "FAIL") << "\n";
  return ok;
}

// Every closed form against the oracle for one design; returns the number of
// unequal scenarios.
int oracle_mismatches(const Design& d, int workers) {
  const int m = d.factors();
  const auto b = bs_spectrum(d);
  std::vector<CriterionCoefficients> all;
  const int F = m * (m - 1) / 2;
  for (int f = 1; f <= F; ++f) all.push_back(coefficients_sf0(m, f));
  for (int g = 0; g <= 3 && g <= m * (m - 1) * (m - 2) / 6; ++g) all.push_back(coefficients_sFg(m, g));
  all.push_back(coefficients_s31(m));
  int bad = 0;
  for (const auto& c : all)
    if (closed_form_s2(b, c) != s2_oracle(d, matching_distribution(c), workers).value) ++bad;
  return bad;
}

bool verify_oracle(const VerifyOptions& o, int workers, std::ostream& out) {
  std::mt19937_64 rng(o.seed);
  bool ok = true;
  for (const auto& [m, n] : {std::pair{4, 8}, std::pair{5, 12}}) {
    int equal = 0;
    for (int i = 0; i < o.samples; ++i)
      if (oracle_mismatches(random_design(m, n, false, rng), workers) == 0) ++equal;
    out << "oracle (m = " << m << ", n = " << n << "): " << equal << "/" << o.samples << " EQUAL\n";
    ok = ok && equal == o.samples;
  }
  return ok;
}

bool verify_afd(const VerifyOptions& o, std::ostream& out) {
  const int m = o.exhaustive_m;
  if (m < 1 || m > 4) throw UsageError("--exhaustive-m must be in 1..4");
  const std::uint32_t codes = 1u << m;
  int checked = 0, disagreements = 0, dense_not_afd = 0;
  for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << codes); ++subset) {
    std::vector<RowCode> rows;
    for (RowCode x = 0; x < codes; ++x)
      if ((subset >> x) & 1u) rows.push_back(x);
    const Design d(m, rows);
    const bool full = is_affinely_full_dimensional(d);
    ++checked;
    if (full != has_no_full_aliasing(j_vector(d))) ++disagreements;
    // more than half the points cannot lie in an affine hyperplane
    if (d.runs() > static_cast<int>(codes / 2) && !full) ++dense_not_afd;
  }
  std::mt19937_64 rng(o.seed);
  int random_bad = 0;
  for (int i = 0; i < o.samples; ++i) {
    const Design d = random_design(5, 12, true, rng);
    if (is_affinely_full_dimensional(d) != has_no_full_aliasing(j_vector(d))) ++random_bad;
  }
  out << "afd (m = " << m << ", all " << checked << " distinct-row designs): " << disagreements
      << " disagreements between affine rank and |j_S| < n\n";
  out << "afd (n > 2^(m-1)): " << dense_not_afd << " designs not full-dimensional\n";
  out << "afd (m = 5, n = 12, " << o.samples << " random): " << random_bad << " disagreements\n";
  return disagreements == 0 && dense_not_afd == 0 && random_bad == 0;
}

int cmd_verify(VerifyOptions o, std::ostream& out) {
  if (!o.props && !o.oracle && !o.afd) o.props = o.oracle = o.afd = true;
  const int workers = o.workers > 0 ? o.workers : default_workers();
  bool ok = true;
  if (o.props) ok = verify_props(o, out) && ok;
  if (o.oracle) ok = verify_oracle(o, workers, out) && ok;
  if (o.afd) ok = verify_afd(o, out) && ok;
  out << (ok ? "verify: PASS" : "verify: FAIL") << "\n";
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

std::vector<std::string> expand_criteria(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    const auto dots = t.find("..");
    const auto eq = t.rfind('=', dots);
    if (dots == std::string::npos || eq == std::string::npos || t.starts_with("dfg:")) {
      out.push_back(t);
      continue;
    }
    const auto [lo, hi] = parse_range(t.substr(eq + 1));
    if (hi < lo) throw UsageError("empty range in '" + t + "'");
    for (int k = lo; k <= hi; ++k) out.push_back(t.substr(0, eq + 1) + std::to_string(k));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate and search two-level fractional factorial designs", "ffd"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"text", "json"};

  EvalOptions eval;
  auto* e = app.add_subcommand("eval", "Evaluate a design file");
  e->add_option("file", eval.file, "Design file")->required();
  e->add_option("--criteria", eval.criteria,
                "bs gma afd sf0:f=K sFg:g=K s31 dfg:<scenario>; K may be a range A..B");
  e->add_flag("--zero-one", eval.zero_one, "Levels are written 0/1 instead of +1/-1");
  e->add_option("--format", eval.format)->check(CLI::IsMember(formats));
  e->add_flag("--no-timing", "Accepted for symmetry; eval output has no timings");
  e->add_option("--workers", eval.workers)->check(CLI::PositiveNumber);

  OracleOptions oracle;
  auto* o = app.add_subcommand("oracle", "Closed form against the enumeration oracle");
  o->add_option("file", oracle.file, "Design file")->required();
  o->add_option("--scenario", oracle.scenarios,
                "sf0:f=K sFg:g=K s31 consistent:f=K,g=K g-then-f:f=K,g=K explicit:PATH")
      ->required();
  o->add_flag("--zero-one", oracle.zero_one);
  o->add_option("--format", oracle.format)->check(CLI::IsMember(formats));
  o->add_option("--cap", oracle.cap, "Refuse supports larger than this");
  o->add_option("--workers", oracle.workers)->check(CLI::PositiveNumber);

  SearchOptions search;
  auto* s = app.add_subcommand("search", "Search for criterion-optimal designs");
  s->add_option("--runs", search.cfg.runs)->check(CLI::PositiveNumber);
  s->add_option("--factors", search.cfg.factors)->check(CLI::PositiveNumber);
  s->add_option("--criterion", search.criterion, "sf0:f=K, sFg:g=K or s31");
  s->add_option("--method", search.method)->check(CLI::IsMember({"exchange", "exhaustive"}));
  s->add_option("--restarts", search.cfg.restarts)->check(CLI::PositiveNumber);
  s->add_option("--seed", search.cfg.seed);
  s->add_option("--tolerance", search.tolerance, "Minimum accepted improvement (exact rational)");
  s->add_option("--space-bound", search.cfg.space_bound, "Largest exhaustive space without --long-running");
  s->add_flag("--replicated", search.replicated, "Allow repeated runs");
  s->add_flag("--long-running", search.cfg.long_running, "Lift the exhaustive space bound");
  s->add_option("--format", search.format)->check(CLI::IsMember(formats));
  s->add_flag("--no-timing", search.no_timing, "Omit wall time (byte-stable output)");
  s->add_option("--workers", search.workers)->check(CLI::PositiveNumber);

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "Run the property suite");
  v->add_flag("--props", verify.props, "Coefficient orderings");
  v->add_option("--m", verify.m_range, "Range of m for --props, e.g. 4..8");
  v->add_flag("--oracle", verify.oracle, "Closed forms against the oracle on random designs");
  v->add_option("--samples", verify.samples)->check(CLI::PositiveNumber);
  v->add_option("--seed", verify.seed);
  v->add_flag("--afd", verify.afd, "Affine-rank against j-vector characterisation");
  v->add_option("--exhaustive-m", verify.exhaustive_m);
  v->add_option("--workers", verify.workers)->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (e->parsed()) return cmd_eval(eval, out);
    if (o->parsed()) return cmd_oracle(oracle, out);
    if (s->parsed()) return cmd_search(search, out);
    return cmd_verify(verify, out);
  } catch (const ParseError& ex) {
    err << "parse error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& ex) {
    err << "verification failure: " << ex.what() << "\n";
    return kExitVerification;
  }
}

}  // namespace ffd::cli
