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

// Test-only oracles and generators.  The oracles are deliberately written
// against plain arrays with explicit index arithmetic so they share no code
// with the library paths they check.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "bell/algebra.hpp"
#include "bell/lhv.hpp"
#include "bell/rng.hpp"

namespace bell_test {

using bell::Complex;
using Mat2 = std::array<std::array<Complex, 2>, 2>;
using Mat4 = std::array<std::array<Complex, 4>, 4>;
using Vec4 = std::array<Complex, 4>;

/// Hand-written sigma.d, independent of bell::pauli_dot.
inline Mat2 pauli_array(double x, double y, double z) {
  return {{{Complex(z), Complex(x, -y)}, {Complex(x, y), Complex(-z)}}};
}

/// Kronecker product by the index formula K[2i+k][2j+l] = A[i][j] B[k][l].
inline Mat4 kron_oracle(const Mat2& a, const Mat2& b) {
  Mat4 k{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int kk = 0; kk < 2; ++kk)
        for (int l = 0; l < 2; ++l) k[2 * i + kk][2 * j + l] = a[i][j] * b[kk][l];
  return k;
}

/// <psi| op |psi> by explicit loops.
inline Complex contraction_oracle(const Vec4& psi, const Mat4& op) {
  Complex acc = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) acc += std::conj(psi[i]) * op[i][j] * psi[j];
  return acc;
}

/// Joint spin correlation <psi| (sigma.a)(x)(sigma.b) |psi> assembled
/// entirely from the oracles above.
inline double correlation_oracle(const Vec4& psi, const bell::Direction& a,
                                 const bell::Direction& b) {
  const Mat4 op = kron_oracle(pauli_array(a.x(), a.y(), a.z()),
                              pauli_array(b.x(), b.y(), b.z()));
  return contraction_oracle(psi, op).real();
}

inline double box_muller(bell::SampleStream& s) {
  const double u = s.next_unit();
  const double v = s.next_unit();
  return std::sqrt(-2.0 * std::log(1.0 - u)) * std::cos(2.0 * std::numbers::pi * v);
}

inline bell::Direction random_direction(bell::SampleStream& s) {
  return bell::sample_unit_sphere(s);
}

/// Haar-like random pure state: 8 normal variates, normalized.
inline bell::TwoQubitState random_state(bell::SampleStream& s) {
  std::array<Complex, 4> amps;
  for (auto& a : amps) a = Complex(box_muller(s), box_muller(s));
  return bell::TwoQubitState::normalized(amps);
}

inline bell::Spinor random_spinor(bell::SampleStream& s) {
  bell::Spinor chi{Complex(box_muller(s), box_muller(s)),
                   Complex(box_muller(s), box_muller(s))};
  const double n = std::sqrt(std::norm(chi[0]) + std::norm(chi[1]));
  chi[0] /= n;
  chi[1] /= n;
  return chi;
}

inline bell::ComplexMatrix random_matrix2(bell::SampleStream& s) {
  bell::ComplexMatrix m(2, 2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      m(r, c) = Complex(2.0 * s.next_unit() - 1.0, 2.0 * s.next_unit() - 1.0);
  return m;
}

inline bell::ComplexMatrix random_hermitian4(bell::SampleStream& s) {
  bell::ComplexMatrix m(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      m(r, c) = Complex(2.0 * s.next_unit() - 1.0, 2.0 * s.next_unit() - 1.0);
  bell::ComplexMatrix h = m + m.adjoint();
  return Complex(0.5) * h;
}

/// Rodrigues rotation of d about `axis` by `angle`.
inline bell::Direction rotate(const bell::Direction& d, const bell::Direction& axis,
                              double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double kx = axis.x(), ky = axis.y(), kz = axis.z();
  const double dx = d.x(), dy = d.y(), dz = d.z();
  const double cross_x = ky * dz - kz * dy;
  const double cross_y = kz * dx - kx * dz;
  const double cross_z = kx * dy - ky * dx;
  const double k_dot_d = kx * dx + ky * dy + kz * dz;
  return bell::Direction::normalized(dx * c + cross_x * s + kx * k_dot_d * (1.0 - c),
                                     dy * c + cross_y * s + ky * k_dot_d * (1.0 - c),
                                     dz * c + cross_z * s + kz * k_dot_d * (1.0 - c));
}

}  // namespace bell_test
