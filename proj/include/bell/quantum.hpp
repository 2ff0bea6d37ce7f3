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

#include <stdexcept>

#include "bell/algebra.hpp"

namespace bell {

enum class Side { A, B };

/// Operator-average spin correlation <psi| (sigma.a)(x)(sigma.b) |psi>.
/// Always lies in [-1, 1] up to float noise.
inline double qm_correlation(const TwoQubitState& psi, const Direction& a,
                             const Direction& b) {
  return expectation(psi, tensor(pauli_dot(a), pauli_dot(b)));
}

/// Single-particle average <sigma.d> on one side of the pair.
inline double qm_marginal(const TwoQubitState& psi, const Direction& d, Side side) {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const ComplexMatrix op =
      side == Side::A ? tensor(pauli_dot(d), id) : tensor(id, pauli_dot(d));
  return expectation(psi, op);
}

/// tr[rho (sigma.a)(x)(sigma.b)] — the density-operator form of the spin
/// correlation.  Equals qm_correlation for rho = |psi><psi|.
inline double qm_correlation_density(const DensityMatrix& rho, const Direction& a,
                                     const Direction& b) {
  const ComplexMatrix op = tensor(pauli_dot(a), pauli_dot(b));
  Complex tr = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) tr += rho.matrix()(i, j) * op(j, i);
  return to_real(tr);
}

struct RearrangementReport {
  double lhs = 0.0;
  double rhs_plus = 0.0;
  double rhs_minus = 0.0;
  bool equal_plus = false;
  bool equal_minus = false;
  double tolerance = 0.0;
};

/// Tests whether the correlation difference E(a,b) - E(a,b') can be
/// rewritten as E(a,b)[1 +/- E(a',b')] - E(a,b')[1 +/- E(a',b)].  The
/// rewrite is an identity for factorizing (product-of-outcomes)
/// correlations but fails for entangled operator averages; both sign
/// choices are reported.
inline RearrangementReport rearrangement_check(const TwoQubitState& psi,
                                               const Direction& a, const Direction& b,
                                               const Direction& a2, const Direction& b2,
                                               double tolerance = 1e-9) {
  detail::require(tolerance > 0.0, "rearrangement_check: tolerance must be positive");
  const double e_ab = qm_correlation(psi, a, b);
  const double e_ab2 = qm_correlation(psi, a, b2);
  const double e_a2b2 = qm_correlation(psi, a2, b2);
  const double e_a2b = qm_correlation(psi, a2, b);

  RearrangementReport report;
  report.tolerance = tolerance;
  report.lhs = e_ab - e_ab2;
  report.rhs_plus = e_ab * (1.0 + e_a2b2) - e_ab2 * (1.0 + e_a2b);
  report.rhs_minus = e_ab * (1.0 - e_a2b2) - e_ab2 * (1.0 - e_a2b);
  report.equal_plus = std::abs(report.lhs - report.rhs_plus) <= tolerance;
  report.equal_minus = std::abs(report.lhs - report.rhs_minus) <= tolerance;
  return report;
}

}  // namespace bell
