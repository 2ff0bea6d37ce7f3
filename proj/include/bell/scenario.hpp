// Copyright (c) 2026 The bell-lab developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bell/inequality.hpp"

namespace bell {

// ---------------------------------------------------------------------------
// Registries
// ---------------------------------------------------------------------------

inline const std::vector<std::pair<std::string, TwoQubitState>>& state_registry() {
  static const std::vector<std::pair<std::string, TwoQubitState>> registry = [] {
    const double r = std::sqrt(0.5);
    const Spinor plus{Complex(r), Complex(r)};
    std::vector<std::pair<std::string, TwoQubitState>> out;
    out.emplace_back("singlet", singlet());
    out.emplace_back("triplet-zero",
                     TwoQubitState({0.0, Complex(r), Complex(r), 0.0}));
    out.emplace_back("up-up", product_state(spin_up, spin_up));
    out.emplace_back("up-down", product_state(spin_up, spin_down));
    out.emplace_back("down-up", product_state(spin_down, spin_up));
    out.emplace_back("down-down", product_state(spin_down, spin_down));
    out.emplace_back("plus-plus", product_state(plus, plus));
    return out;
  }();
  return registry;
}

inline std::string state_names() {
  std::string names;
  for (const auto& [name, state] : state_registry())
    names += (names.empty() ? "" : ", ") + name;
  return names;
}

inline TwoQubitState make_named_state(std::string_view name) {
  for (const auto& [n, state] : state_registry())
    if (n == name) return state;
  throw std::invalid_argument("unknown state '" + std::string(name) +
                              "'; available: " + state_names());
}

// ---------------------------------------------------------------------------
// Scenario model
// ---------------------------------------------------------------------------

enum class OutputFormat { Csv, Human };

struct Scenario {
  std::string source_kind;   // "state" | "density" | "model"
  std::string source_text;   // canonical value text for serialization
  std::string source_label;  // comma-free descriptor for output rows
  std::optional<TwoQubitState> state;
  std::optional<DensityMatrix> density;
  std::optional<HiddenVariableModel> model;

  std::vector<std::pair<std::string, Direction>> directions;
  std::vector<std::array<std::string, 3>> triples;
  IntegrationConfig integration;
  std::vector<std::string> inequalities;  // empty = all
  std::string output = "-";
  OutputFormat format = OutputFormat::Csv;
};

/// Parse or validation failure; remembers the offending line and key.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(int line, std::string key, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", key '" + key +
                                          "': " + message
                                    : message),
        line_(line),
        key_(std::move(key)) {}

  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string token;
  while (is >> token) out.push_back(token);
  return out;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string current;
  for (const char c : s) {
    if (c == sep) {
      out.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(trim(current));
  return out;
}

/// Accepts `1.25` or `(re,im)`.
inline Complex parse_complex(const std::string& token, int line, const std::string& key) {
  try {
    if (!token.empty() && token.front() == '(') {
      if (token.back() != ')') throw std::invalid_argument("unbalanced parenthesis");
      const auto comma = token.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("missing comma");
      std::size_t used = 0;
      const std::string re_text = token.substr(1, comma - 1);
      const double re = std::stod(re_text, &used);
      if (used != re_text.size()) throw std::invalid_argument("trailing characters");
      const std::string im_text = token.substr(comma + 1, token.size() - comma - 2);
      const double im = std::stod(im_text, &used);
      if (used != im_text.size()) throw std::invalid_argument("trailing characters");
      return {re, im};
    }
    std::size_t used = 0;
    const double re = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("trailing characters");
    return {re, 0.0};
  } catch (const std::exception&) {
    throw ScenarioError(line, key,
                        "cannot parse '" + token + "' as a number or (re,im) pair");
  }
}

inline double parse_double(const std::string& token, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(line, key, "cannot parse '" + token + "' as a number");
  }
}

inline std::uint64_t parse_u64(const std::string& token, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(token, &used);
    if (used != token.size() || token.front() == '-')
      throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(line, key, "cannot parse '" + token + "' as a non-negative integer");
  }
}

inline std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  return "(" + format_real(z.real()) + "," + format_real(z.imag()) + ")";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parses the plain-text scenario grammar: one `key = value` per line,
/// `#` starts a comment, `directions` and `triple` accumulate across lines.
/// See the README for the full grammar.
inline Scenario parse_scenario_text(std::istream& in) {
  Scenario sc;
  bool have_source = false;
  std::string text_line;
  int line = 0;

  while (std::getline(in, text_line)) {
    ++line;
    const auto hash = text_line.find('#');
    if (hash != std::string::npos) text_line.erase(hash);
    const std::string content = detail::trim(text_line);
    if (content.empty()) continue;

    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ScenarioError(line, "", "expected 'key = value', got '" + content + "'");
    const std::string key = detail::trim(content.substr(0, eq));
    const std::string value = detail::trim(content.substr(eq + 1));
    if (key.empty()) throw ScenarioError(line, "", "missing key before '='");
    if (value.empty()) throw ScenarioError(line, key, "missing value");

    if (key == "state" || key == "density" || key == "model") {
      if (have_source)
        throw ScenarioError(line, key, "source already set to '" + sc.source_kind + "'");
      have_source = true;
      sc.source_kind = key;
      const std::vector<std::string> tokens = detail::split_ws(value);

      if (key == "state") {
        if (tokens.front() == "amplitudes") {
          if (tokens.size() != 5)
            throw ScenarioError(line, key, "'amplitudes' needs exactly 4 entries");
          std::array<Complex, 4> amps;
          for (std::size_t i = 0; i < 4; ++i)
            amps[i] = detail::parse_complex(tokens[i + 1], line, key);
          double n2 = 0.0;
          for (const auto& a : amps) n2 += std::norm(a);
          if (std::abs(std::sqrt(n2) - 1.0) > 1e-6)
            throw ScenarioError(line, key,
                                "amplitudes must be normalized to about 1e-6 (norm " +
                                    detail::format_real(std::sqrt(n2)) + ")");
          sc.state = TwoQubitState::normalized(amps);
          std::string canon = "amplitudes";
          for (const auto& a : sc.state->amplitudes())
            canon += " " + detail::format_complex(a);
          sc.source_text = canon;
          sc.source_label = "state:custom";
        } else {
          if (tokens.size() != 1)
            throw ScenarioError(line, key, "expected a state name or 'amplitudes ...'");
          try {
            sc.state = make_named_state(tokens.front());
          } catch (const std::invalid_argument& e) {
            throw ScenarioError(line, key, e.what());
          }
          sc.source_text = tokens.front();
          sc.source_label = "state:" + tokens.front();
        }
      } else if (key == "density") {
        try {
          if (tokens.front() == "maximally-mixed" && tokens.size() == 1) {
            sc.density = DensityMatrix::maximally_mixed();
            sc.source_text = "maximally-mixed";
            sc.source_label = "density:maximally-mixed";
          } else if (tokens.front() == "pure" && tokens.size() == 2) {
            sc.density = density_from_pure(make_named_state(tokens[1]));
            sc.source_text = "pure " + tokens[1];
            sc.source_label = "density:pure-" + tokens[1];
          } else if (tokens.front() == "entries" && tokens.size() == 17) {
            ComplexMatrix rho(4, 4);
            for (std::size_t i = 0; i < 16; ++i)
              rho(i / 4, i % 4) = detail::parse_complex(tokens[i + 1], line, key);
            sc.density = DensityMatrix(rho);
            std::string canon = "entries";
            for (std::size_t i = 0; i < 16; ++i)
              canon += " " + detail::format_complex(sc.density->matrix()(i / 4, i % 4));
            sc.source_text = canon;
            sc.source_label = "density:custom";
          } else {
            throw std::invalid_argument(
                "expected 'maximally-mixed', 'pure <state>' or 'entries <16 values>'");
          }
        } catch (const ScenarioError&) {
          throw;
        } catch (const std::exception& e) {
          throw ScenarioError(line, key, e.what());
        }
      } else {  // model
        if (tokens.size() != 1)
          throw ScenarioError(line, key, "expected a model name");
        try {
          sc.model = make_model(tokens.front());
        } catch (const std::invalid_argument& e) {
          throw ScenarioError(line, key, e.what());
        }
        sc.source_text = tokens.front();
        sc.source_label = "model:" + tokens.front();
      }
    } else if (key == "directions") {
      for (const std::string& entry : detail::split_ws(value)) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos || colon == 0)
          throw ScenarioError(line, key,
                              "expected 'name:angle-deg' or 'name:(x,y,z)', got '" + entry + "'");
        const std::string name = entry.substr(0, colon);
        const std::string coords = entry.substr(colon + 1);
        for (const auto& [existing, d] : sc.directions)
          if (existing == name)
            throw ScenarioError(line, key, "direction '" + name + "' defined twice");
        if (!coords.empty() && coords.front() == '(') {
          if (coords.back() != ')')
            throw ScenarioError(line, key, "direction '" + name + "': missing ')'");
          const std::vector<std::string> parts =
              detail::split_on(coords.substr(1, coords.size() - 2), ',');
          if (parts.size() != 3)
            throw ScenarioError(line, key, "direction '" + name + "' needs 3 components");
          const double x = detail::parse_double(parts[0], line, key);
          const double y = detail::parse_double(parts[1], line, key);
          const double z = detail::parse_double(parts[2], line, key);
          try {
            sc.directions.emplace_back(name, Direction::normalized(x, y, z));
          } catch (const std::invalid_argument& e) {
            throw ScenarioError(line, key, e.what());
          }
        } else {
          const double deg = detail::parse_double(coords, line, key);
          sc.directions.emplace_back(name, Direction::xz_plane(deg_to_rad(deg)));
        }
      }
    } else if (key == "triple") {
      const std::vector<std::string> names = detail::split_ws(value);
      if (names.size() != 3)
        throw ScenarioError(line, key, "a triple needs exactly 3 direction names");
      sc.triples.push_back({names[0], names[1], names[2]});
    } else if (key == "method") {
      if (value == "monte-carlo")
        sc.integration.method = IntegrationConfig::Method::MonteCarlo;
      else if (value == "quadrature" || value == "sphere-quadrature")
        sc.integration.method = IntegrationConfig::Method::SphereQuadrature;
      else
        throw ScenarioError(line, key, "expected 'monte-carlo' or 'quadrature'");
    } else if (key == "samples") {
      sc.integration.sample_count = detail::parse_u64(value, line, key);
      if (sc.integration.sample_count == 0)
        throw ScenarioError(line, key, "samples must be positive");
    } else if (key == "seed") {
      sc.integration.seed = detail::parse_u64(value, line, key);
    } else if (key == "sigma") {
      sc.integration.confidence_sigma = detail::parse_double(value, line, key);
      if (!(sc.integration.confidence_sigma > 0.0))
        throw ScenarioError(line, key, "sigma must be positive");
    } else if (key == "threads") {
      sc.integration.threads = static_cast<unsigned>(detail::parse_u64(value, line, key));
    } else if (key == "inequalities") {
      if (value == "all") {
        sc.inequalities.clear();
      } else {
        for (const std::string& name : detail::split_on(value, ',')) {
          if (name != "bell_original" && name != "generalized_bell" && name != "bound_check")
            throw ScenarioError(line, key,
                                "unknown inequality '" + name +
                                    "'; available: bell_original, generalized_bell, "
                                    "bound_check, or all");
          sc.inequalities.push_back(name);
        }
      }
    } else if (key == "output") {
      sc.output = value;
    } else if (key == "format") {
      if (value == "csv")
        sc.format = OutputFormat::Csv;
      else if (value == "human")
        sc.format = OutputFormat::Human;
      else
        throw ScenarioError(line, key, "expected 'csv' or 'human'");
    } else {
      throw ScenarioError(line, key, "unknown key");
    }
  }

  if (!have_source) throw ScenarioError(0, "", "scenario defines no source (state, density or model)");
  return sc;
}

inline Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(0, "", "cannot open scenario file '" + path + "'");
  return parse_scenario_text(in);
}

/// Canonical text for a scenario; re-parsing it reproduces the same
/// evaluation output byte for byte.
inline std::string serialize_scenario(const Scenario& sc) {
  using detail::format_real;
  std::ostringstream os;
  os << sc.source_kind << " = " << sc.source_text << "\n";
  if (!sc.directions.empty()) {
    os << "directions =";
    for (const auto& [name, d] : sc.directions)
      os << " " << name << ":(" << format_real(d.x()) << "," << format_real(d.y()) << ","
         << format_real(d.z()) << ")";
    os << "\n";
  }
  for (const auto& t : sc.triples) os << "triple = " << t[0] << " " << t[1] << " " << t[2] << "\n";
  os << "method = "
     << (sc.integration.method == IntegrationConfig::Method::MonteCarlo ? "monte-carlo"
                                                                        : "quadrature")
     << "\n";
  os << "samples = " << sc.integration.sample_count << "\n";
  os << "seed = " << sc.integration.seed << "\n";
  os << "sigma = " << format_real(sc.integration.confidence_sigma) << "\n";
  os << "threads = " << sc.integration.threads << "\n";
  if (sc.inequalities.empty()) {
    os << "inequalities = all\n";
  } else {
    os << "inequalities = ";
    for (std::size_t i = 0; i < sc.inequalities.size(); ++i)
      os << (i ? "," : "") << sc.inequalities[i];
    os << "\n";
  }
  os << "output = " << sc.output << "\n";
  os << "format = " << (sc.format == OutputFormat::Csv ? "csv" : "human") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<unsigned> threads;
  std::optional<std::string> output;
};

namespace detail {

struct ResolvedTriple {
  std::array<std::string, 3> names;
  std::array<Direction, 3> dirs;
};

inline Direction find_direction(const Scenario& sc, const std::string& name) {
  for (const auto& [n, d] : sc.directions)
    if (n == name) return d;
  std::string defined;
  for (const auto& [n, d] : sc.directions) defined += (defined.empty() ? "" : ", ") + n;
  throw ScenarioError(0, "triple",
                      "unknown direction '" + name + "'; defined: " +
                          (defined.empty() ? "(none)" : defined));
}

inline bool report_selected(const Scenario& sc, const std::string& name) {
  if (sc.inequalities.empty()) return true;
  for (const auto& n : sc.inequalities)
    if (n == name) return true;
  return false;
}

inline std::string triple_id(const ResolvedTriple& t) {
  return t.names[0] + ":" + t.names[1] + ":" + t.names[2];
}

inline std::string render_correlation_row(const std::string& id, const char* pair,
                                          const CorrelationEstimate& e) {
  return id + "," + pair + "," + format_real(e.mean) + "," + format_real(e.std_error) +
         "," + std::to_string(e.sample_count) + "," + std::string(to_string(e.method));
}

inline std::string render_csv(const Scenario& sc, const std::vector<ResolvedTriple>& triples,
                              const std::vector<TripleEvaluation>& evals) {
  std::ostringstream os;
  os << "# correlations\n";
  os << "triple,pair,value,std_error,samples,method\n";
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const std::string id = triple_id(triples[i]);
    os << render_correlation_row(id, "ab", evals[i].p_ab) << "\n";
    os << render_correlation_row(id, "ac", evals[i].p_ac) << "\n";
    os << render_correlation_row(id, "bc", evals[i].p_bc) << "\n";
  }
  os << "# inequalities\n";
  os << "triple," << inequality_csv_header() << "\n";
  for (std::size_t i = 0; i < evals.size(); ++i) {
    for (const auto& report : evals[i].reports) {
      if (!report_selected(sc, report.name)) continue;
      os << triple_id(triples[i]) << "," << to_csv_row(report, evals[i].source) << "\n";
    }
  }
  return os.str();
}

inline std::string format_display(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string render_human(const Scenario& sc, const std::vector<ResolvedTriple>& triples,
                                const std::vector<TripleEvaluation>& evals) {
  std::ostringstream os;
  os << "source: " << sc.source_label << "\n";
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const auto& e = evals[i];
    os << "triple " << triple_id(triples[i]) << ": P(a,b) = " << format_display(e.p_ab.mean)
       << ", P(a,c) = " << format_display(e.p_ac.mean)
       << ", P(b,c) = " << format_display(e.p_bc.mean) << " [" << to_string(e.p_ab.method)
       << "]\n";
    for (const auto& report : e.reports) {
      if (!report_selected(sc, report.name)) continue;
      os << "  " << report.name << ": lhs = " << format_display(report.lhs)
         << ", rhs = " << format_display(report.rhs)
         << ", margin = " << format_display(report.margin) << " -> "
         << (report.satisfied ? "satisfied" : "VIOLATED") << "\n";
    }
  }
  return os.str();
}

}  // namespace detail

/// Resolves an output path: "-" means stdout, and relative paths land in
/// $BELL_LAB_OUTPUT_DIR when that variable is set.
inline std::string resolve_output_path(const std::string& path) {
  if (path == "-") return path;
  const char* dir = std::getenv("BELL_LAB_OUTPUT_DIR");
  if (dir != nullptr && *dir != '\0' && std::filesystem::path(path).is_relative())
    return (std::filesystem::path(dir) / path).string();
  return path;
}

/// Evaluates a parsed scenario and writes its report.  Returns the process
/// exit status: 0 on success, 1 on configuration problems, 2 when the
/// evaluation itself fails.
inline int run_scenario(Scenario sc, const RunOverrides& overrides = {},
                        std::ostream& diagnostics = std::cerr) {
  if (overrides.seed) sc.integration.seed = *overrides.seed;
  if (overrides.samples) sc.integration.sample_count = *overrides.samples;
  if (overrides.threads) sc.integration.threads = *overrides.threads;
  if (overrides.output) sc.output = *overrides.output;

  std::vector<detail::ResolvedTriple> triples;
  try {
    validate(sc.integration);
    if (sc.triples.empty()) throw ScenarioError(0, "triple", "no direction triples");
    for (const auto& names : sc.triples) {
      detail::ResolvedTriple t{names,
                               {detail::find_direction(sc, names[0]),
                                detail::find_direction(sc, names[1]),
                                detail::find_direction(sc, names[2])}};
      triples.push_back(std::move(t));
    }
  } catch (const std::exception& e) {
    diagnostics << "scenario error: " << e.what() << "\n";
    return 1;
  }

  std::vector<TripleEvaluation> evals;
  try {
    CorrelationSource source = [&]() -> CorrelationSource {
      if (sc.state) return *sc.state;
      if (sc.density) return *sc.density;
      return *sc.model;
    }();
    const std::optional<IntegrationConfig> cfg =
        sc.model ? std::optional<IntegrationConfig>(sc.integration) : std::nullopt;
    for (const auto& t : triples)
      evals.push_back(evaluate_all(source, t.dirs[0], t.dirs[1], t.dirs[2], cfg, 1e-9,
                                   sc.source_label));
  } catch (const std::exception& e) {
    diagnostics << "evaluation error: " << e.what() << "\n";
    return 2;
  }

  const std::string body = sc.format == OutputFormat::Csv
                               ? detail::render_csv(sc, triples, evals)
                               : detail::render_human(sc, triples, evals);
  const std::string target = resolve_output_path(sc.output);
  if (target == "-") {
    std::cout << body;
    return 0;
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) {
    diagnostics << "scenario error: cannot open output file '" << target << "'\n";
    return 1;
  }
  out << body;
  return out.good() ? 0 : 1;
}

/// Loads, evaluates and reports a scenario file.
inline int run_scenario_file(const std::string& path, const RunOverrides& overrides = {},
                             std::ostream& diagnostics = std::cerr) {
  Scenario sc;
  try {
    sc = parse_scenario_file(path);
  } catch (const std::exception& e) {
    diagnostics << "scenario error: " << path << ": " << e.what() << "\n";
    return 1;
  }
  return run_scenario(std::move(sc), overrides, diagnostics);
}

// ---------------------------------------------------------------------------
// Built-in reference check
// ---------------------------------------------------------------------------

struct ReferenceCheckEntry {
  std::string label;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

struct ReferenceCheckReport {
  std::vector<ReferenceCheckEntry> entries;
  bool original_violated = false;     // expected: true
  bool generalized_satisfied = false; // expected: true
  bool all_ok = false;
};

/// Recomputes the built-in reference configuration — the singlet with
/// coplanar directions a = 0, b = 60, c = 120 degrees, a' = b' = c — and
/// compares every quantity against its pinned value: the three
/// correlations (-1/2, +1/2, -1/2), the rearrangement identity's
/// lhs = -1 and rhs(+/-) = -1/4 and -7/4, the vanishing basis-mixture
/// sum, and the two inequality verdicts.
inline ReferenceCheckReport paper_check() {
  const Direction a = Direction::xz_plane(0.0);
  const Direction b = Direction::xz_plane(deg_to_rad(60.0));
  const Direction c = Direction::xz_plane(deg_to_rad(120.0));
  const TwoQubitState psi = singlet();

  ReferenceCheckReport report;
  const auto add = [&report](std::string label, double value, double expected,
                             double tolerance) {
    const bool ok = std::abs(value - expected) <= tolerance;
    report.entries.push_back({std::move(label), value, expected, tolerance, ok});
  };

  const double p_ab = qm_correlation(psi, a, b);
  const double p_ac = qm_correlation(psi, a, c);
  const double p_bc = qm_correlation(psi, b, c);
  add("P(a,b)", p_ab, -0.5, 1e-12);
  add("P(a,c)", p_ac, 0.5, 1e-12);
  add("P(b,c)", p_bc, -0.5, 1e-12);

  const RearrangementReport rearrangement = rearrangement_check(psi, a, b, c, c);
  add("lhs", rearrangement.lhs, -1.0, 1e-9);
  add("rhs(+)", rearrangement.rhs_plus, -0.25, 1e-9);
  add("rhs(-)", rearrangement.rhs_minus, -1.75, 1e-9);

  add("basis-mixture", singlet_basis_mixture_expectation(a, b), 0.0, 1e-12);

  const InequalityReport original = bell_original(p_ab, p_ac, p_bc);
  const InequalityReport generalized = generalized_bell(p_ab, p_ac, p_bc);
  add("generalized margin", generalized.margin, 1.5, 1e-9);
  report.original_violated = !original.satisfied;
  report.generalized_satisfied = generalized.satisfied;

  report.all_ok = report.original_violated && report.generalized_satisfied;
  for (const auto& entry : report.entries) report.all_ok = report.all_ok && entry.ok;
  return report;
}

/// Human-readable rendering of the reference check, one line per quantity.
inline std::string render(const ReferenceCheckReport& report) {
  using detail::format_display;
  std::ostringstream os;
  os << "reference configuration: singlet, coplanar a = 0 deg, b = 60 deg, c = 120 deg\n";
  for (const auto& e : report.entries) {
    os << "  " << e.label << " = " << format_display(e.value) << "  [expected "
       << format_display(e.expected) << "]  " << (e.ok ? "ok" : "MISMATCH");
    if (!e.ok) os << "  (off by " << format_display(std::abs(e.value - e.expected)) << ")";
    os << "\n";
  }
  os << "  original inequality -> " << (report.original_violated ? "violated" : "satisfied")
     << "  [expected violated]  " << (report.original_violated ? "ok" : "MISMATCH") << "\n";
  os << "  generalized inequality -> "
     << (report.generalized_satisfied ? "satisfied" : "violated")
     << "  [expected satisfied]  " << (report.generalized_satisfied ? "ok" : "MISMATCH")
     << "\n";
  os << "result: " << (report.all_ok ? "PASS" : "FAIL") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Correlation curves
// ---------------------------------------------------------------------------

/// Writes a plain-text table of correlation against the angle between the
/// two analyzer directions: one angle column plus one column per source.
/// Directions are a = +z and b in the xz-plane at the row's angle.
/// Returns 0, or 1 for an invalid range or empty source list, or 2 when a
/// source fails to evaluate.
inline int emit_correlation_curve(
    const std::vector<std::pair<std::string, CorrelationSource>>& sources,
    double start_deg, double stop_deg, double step_deg, const IntegrationConfig& cfg,
    std::ostream& out, std::ostream& diagnostics = std::cerr) {
  if (sources.empty()) {
    diagnostics << "curve error: no sources given\n";
    return 1;
  }
  if (!(step_deg > 0.0) || stop_deg < start_deg) {
    diagnostics << "curve error: invalid range " << start_deg << "..." << stop_deg
                << " step " << step_deg << "\n";
    return 1;
  }

  std::ostringstream body;
  body << "# angle_deg";
  for (const auto& [label, source] : sources) body << "\t" << label;
  body << "\n";

  try {
    validate(cfg);
    const Direction a = Direction::xz_plane(0.0);
    for (std::size_t k = 0;; ++k) {
      const double angle = start_deg + static_cast<double>(k) * step_deg;
      if (angle > stop_deg + 1e-9) break;
      const Direction b = Direction::xz_plane(deg_to_rad(angle));
      body << detail::format_real(angle);
      for (const auto& [label, source] : sources) {
        double value = 0.0;
        if (const auto* psi = std::get_if<TwoQubitState>(&source))
          value = qm_correlation(*psi, a, b);
        else if (const auto* rho = std::get_if<DensityMatrix>(&source))
          value = qm_correlation_density(*rho, a, b);
        else
          value = lhv_correlation(std::get<HiddenVariableModel>(source), a, b, cfg).mean;
        body << "\t" << detail::format_real(value);
      }
      body << "\n";
    }
  } catch (const std::exception& e) {
    diagnostics << "curve error: " << e.what() << "\n";
    return 2;
  }

  out << body.str();
  return 0;
}

}  // namespace bell
