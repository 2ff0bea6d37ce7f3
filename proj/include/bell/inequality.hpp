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

#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bell/lhv.hpp"
#include "bell/quantum.hpp"

namespace bell {

namespace detail {

/// 17 significant digits, C locale: round-trips doubles and keeps output
/// files byte-stable.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void require_correlation(double v, double tol, std::string_view label) {
  if (!(std::abs(v) <= 1.0 + tol))
    throw std::invalid_argument(std::string(label) + " = " + format_real(v) +
                                " is not a correlation in [-1, 1]");
}

}  // namespace detail

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool satisfied = false;
  double tolerance = 0.0;
  std::vector<double> inputs;
};

namespace detail {

inline InequalityReport make_report(std::string name, double lhs, double rhs,
                                    double tolerance, std::vector<double> inputs) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.tolerance = tolerance;
  r.satisfied = r.margin >= -tolerance;
  r.inputs = std::move(inputs);
  return r;
}

}  // namespace detail

/// Three-setting inequality |P(a,b) - P(a,c)| <= 1 + P(b,c), satisfied by
/// every product-of-outcomes correlation.
inline InequalityReport bell_original(double p_ab, double p_ac, double p_bc,
                                      double tolerance = 1e-9) {
  detail::require_correlation(p_ab, tolerance, "p_ab");
  detail::require_correlation(p_ac, tolerance, "p_ac");
  detail::require_correlation(p_bc, tolerance, "p_bc");
  return detail::make_report("bell_original", std::abs(p_ab - p_ac), 1.0 + p_bc,
                             tolerance, {p_ab, p_ac, p_bc});
}

/// Generalized three-setting inequality |P(a,b) - P(a,c)| <= 3 - |P(b,c)|,
/// a consequence of each correlation lying in [-1, 1]; holds for operator
/// averages as well.
inline InequalityReport generalized_bell(double p_ab, double p_ac, double p_bc,
                                         double tolerance = 1e-9) {
  detail::require_correlation(p_ab, tolerance, "p_ab");
  detail::require_correlation(p_ac, tolerance, "p_ac");
  detail::require_correlation(p_bc, tolerance, "p_bc");
  return detail::make_report("generalized_bell", std::abs(p_ab - p_ac),
                             3.0 - std::abs(p_bc), tolerance, {p_ab, p_ac, p_bc});
}

struct BoundEntry {
  double value = 0.0;
  bool in_bounds = false;
};

struct BoundReport {
  std::vector<BoundEntry> entries;
  /// |v0 - v1| + |v2| checked against 3, when at least three values are given.
  std::optional<double> composite;
  std::optional<bool> composite_ok;
  double tolerance = 0.0;
};

/// Flags correlations that stray outside [-1, 1] and, given a triple,
/// reports the three-term sum |p_ab - p_ac| + |p_bc| against its bound 3.
inline BoundReport bound_check(std::span<const double> correlations,
                               double tolerance = 1e-9) {
  BoundReport report;
  report.tolerance = tolerance;
  for (const double v : correlations)
    report.entries.push_back({v, std::abs(v) <= 1.0 + tolerance});
  if (correlations.size() >= 3) {
    report.composite = std::abs(correlations[0] - correlations[1]) +
                       std::abs(correlations[2]);
    report.composite_ok = *report.composite <= 3.0 + tolerance;
  }
  return report;
}

namespace extensions {

/// Four-setting CHSH combination |E(a,b) - E(a,b') + E(a',b) + E(a',b')|
/// against its product-correlation bound 2.  This is an optional extra on
/// top of the three-setting family and takes no part in the reference
/// checks.
inline InequalityReport chsh(double e_ab, double e_ab2, double e_a2b, double e_a2b2,
                             double tolerance = 1e-9) {
  detail::require_correlation(e_ab, tolerance, "e_ab");
  detail::require_correlation(e_ab2, tolerance, "e_ab2");
  detail::require_correlation(e_a2b, tolerance, "e_a2b");
  detail::require_correlation(e_a2b2, tolerance, "e_a2b2");
  return detail::make_report("chsh_extension", std::abs(e_ab - e_ab2 + e_a2b + e_a2b2),
                             2.0, tolerance, {e_ab, e_ab2, e_a2b, e_a2b2});
}

}  // namespace extensions

using CorrelationSource = std::variant<TwoQubitState, DensityMatrix, HiddenVariableModel>;

struct TripleEvaluation {
  CorrelationEstimate p_ab, p_ac, p_bc;
  std::vector<InequalityReport> reports;  // bell_original, generalized_bell, bound_check
  std::string source;
  double tolerance = 0.0;  // effective verdict tolerance, widened for Monte Carlo
};

/// Evaluates the full inequality set for one direction triple against a
/// quantum state, a density operator, or a hidden-variable model.  LHV
/// sources require an IntegrationConfig; their verdict tolerance widens by
/// confidence_sigma times the quadrature-sum of the three standard errors.
inline TripleEvaluation evaluate_all(const CorrelationSource& source, const Direction& a,
                                     const Direction& b, const Direction& c,
                                     const std::optional<IntegrationConfig>& cfg = std::nullopt,
                                     double tolerance = 1e-9,
                                     std::string_view label = {}) {
  TripleEvaluation eval;

  if (const auto* psi = std::get_if<TwoQubitState>(&source)) {
    eval.source = label.empty() ? "state" : std::string(label);
    eval.p_ab = {qm_correlation(*psi, a, b), 0.0, 1, EstimateMethod::Exact};
    eval.p_ac = {qm_correlation(*psi, a, c), 0.0, 1, EstimateMethod::Exact};
    eval.p_bc = {qm_correlation(*psi, b, c), 0.0, 1, EstimateMethod::Exact};
  } else if (const auto* rho = std::get_if<DensityMatrix>(&source)) {
    eval.source = label.empty() ? "density" : std::string(label);
    eval.p_ab = {qm_correlation_density(*rho, a, b), 0.0, 1, EstimateMethod::Exact};
    eval.p_ac = {qm_correlation_density(*rho, a, c), 0.0, 1, EstimateMethod::Exact};
    eval.p_bc = {qm_correlation_density(*rho, b, c), 0.0, 1, EstimateMethod::Exact};
  } else {
    const auto& model = std::get<HiddenVariableModel>(source);
    if (!cfg)
      throw std::invalid_argument(
          "evaluate_all: a hidden-variable source needs an IntegrationConfig");
    eval.source = label.empty() ? model.name : std::string(label);
    eval.p_ab = lhv_correlation(model, a, b, *cfg);
    eval.p_ac = lhv_correlation(model, a, c, *cfg);
    eval.p_bc = lhv_correlation(model, b, c, *cfg);
  }

  double tol = tolerance;
  if (cfg && (eval.p_ab.std_error > 0.0 || eval.p_ac.std_error > 0.0 ||
              eval.p_bc.std_error > 0.0)) {
    const double propagated = std::sqrt(eval.p_ab.std_error * eval.p_ab.std_error +
                                        eval.p_ac.std_error * eval.p_ac.std_error +
                                        eval.p_bc.std_error * eval.p_bc.std_error);
    tol += cfg->confidence_sigma * propagated;
  }
  eval.tolerance = tol;

  const double ab = eval.p_ab.mean, ac = eval.p_ac.mean, bc = eval.p_bc.mean;
  eval.reports.push_back(bell_original(ab, ac, bc, tol));
  eval.reports.push_back(generalized_bell(ab, ac, bc, tol));
  const std::array<double, 3> values{ab, ac, bc};
  const BoundReport bounds = bound_check(values, tol);
  eval.reports.push_back(detail::make_report("bound_check", *bounds.composite, 3.0, tol,
                                             {ab, ac, bc}));
  return eval;
}

inline std::string inequality_csv_header() {
  return "name,lhs,rhs,margin,satisfied,source";
}

/// One CSV row per report: name,lhs,rhs,margin,satisfied,source.
inline std::string to_csv_row(const InequalityReport& report, std::string_view source) {
  using detail::format_real;
  return report.name + "," + format_real(report.lhs) + "," + format_real(report.rhs) +
         "," + format_real(report.margin) + "," + (report.satisfied ? "true" : "false") +
         "," + std::string(source);
}

}  // namespace bell
