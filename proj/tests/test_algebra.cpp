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

#include <catch2/catch_amalgamated.hpp>

#include "bell/algebra.hpp"
#include "support.hpp"

using namespace bell;
using bell_test::kron_oracle;
using bell_test::pauli_array;

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752;
}

TEST_CASE("pauli_dot reproduces the basis operators") {
  const ComplexMatrix sz = pauli_dot(Direction(0, 0, 1));
  CHECK(sz(0, 0) == Complex(1.0));
  CHECK(sz(0, 1) == Complex(0.0));
  CHECK(sz(1, 0) == Complex(0.0));
  CHECK(sz(1, 1) == Complex(-1.0));

  const ComplexMatrix sx = pauli_dot(Direction(1, 0, 0));
  CHECK(sx(0, 0) == Complex(0.0));
  CHECK(sx(0, 1) == Complex(1.0));
  CHECK(sx(1, 0) == Complex(1.0));
  CHECK(sx(1, 1) == Complex(0.0));
}

TEST_CASE("pauli_dot of a tilted axis matches the entrywise sum") {
  // (sigma_x + sigma_z)/sqrt(2), written out by hand.
  const ComplexMatrix m = pauli_dot(Direction(kInvSqrt2, 0.0, kInvSqrt2));
  const ComplexMatrix expected{{Complex(kInvSqrt2), Complex(kInvSqrt2)},
                               {Complex(kInvSqrt2), Complex(-kInvSqrt2)}};
  CHECK(m.distance_to(expected) <= 1e-15);
}

TEST_CASE("pauli_dot is Hermitian, traceless and squares to identity") {
  SampleStream s(101, 0);
  for (int i = 0; i < 1000; ++i) {
    const Direction d = bell_test::random_direction(s);
    const ComplexMatrix m = pauli_dot(d);
    REQUIRE(m.is_hermitian(1e-12));
    REQUIRE(std::abs(m.trace()) <= 1e-12);
    REQUIRE((m * m).distance_to(ComplexMatrix::identity(2)) <= 1e-12);
  }
}

TEST_CASE("tensor identity and diagonal cases") {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  CHECK(tensor(id, id).distance_to(ComplexMatrix::identity(4)) == 0.0);

  const ComplexMatrix zz = tensor(pauli_z(), pauli_z());
  ComplexMatrix expected(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 1) = -1.0;
  expected(2, 2) = -1.0;
  expected(3, 3) = 1.0;
  CHECK(zz.distance_to(expected) == 0.0);
}

TEST_CASE("tensor matches the index-formula oracle") {
  const ComplexMatrix xz = tensor(pauli_x(), pauli_z());
  const auto oracle = kron_oracle(pauli_array(1, 0, 0), pauli_array(0, 0, 1));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      REQUIRE(std::abs(xz(i, j) - oracle[i][j]) == 0.0);
  // anti-diagonal blocks with entries 1, -1, 1, -1
  CHECK(xz(0, 2) == Complex(1.0));
  CHECK(xz(1, 3) == Complex(-1.0));
  CHECK(xz(2, 0) == Complex(1.0));
  CHECK(xz(3, 1) == Complex(-1.0));
}

TEST_CASE("tensor rejects shapes other than 2x2") {
  CHECK_THROWS_AS(tensor(ComplexMatrix::identity(4), ComplexMatrix::identity(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(tensor(ComplexMatrix::identity(2), ComplexMatrix(2, 3)),
                  std::invalid_argument);
}

TEST_CASE("tensor is bilinear") {
  SampleStream s(102, 0);
  for (int i = 0; i < 200; ++i) {
    const ComplexMatrix m = bell_test::random_matrix2(s);
    const ComplexMatrix n = bell_test::random_matrix2(s);
    const ComplexMatrix p = bell_test::random_matrix2(s);
    const Complex alpha(2.0 * s.next_unit() - 1.0, 2.0 * s.next_unit() - 1.0);
    const ComplexMatrix lhs = tensor(alpha * m + n, p);
    const ComplexMatrix rhs = alpha * tensor(m, p) + tensor(n, p);
    REQUIRE(lhs.distance_to(rhs) <= 1e-12);
  }
}

TEST_CASE("singlet amplitudes, norm and swap antisymmetry") {
  const TwoQubitState psi = singlet();
  CHECK(std::abs(psi.amplitude(0)) == 0.0);
  CHECK(std::abs(psi.amplitude(1) - Complex(0.7071067811865476)) <= 1e-16);
  CHECK(std::abs(psi.amplitude(2) - Complex(-0.7071067811865476)) <= 1e-16);
  CHECK(std::abs(psi.amplitude(3)) == 0.0);

  double n2 = 0.0;
  for (const auto& a : psi.amplitudes()) n2 += std::norm(a);
  CHECK(std::abs(n2 - 1.0) <= 1e-15);

  const TwoQubitState swapped = psi.swapped();
  for (std::size_t i = 0; i < 4; ++i)
    REQUIRE(std::abs(swapped.amplitude(i) + psi.amplitude(i)) <= 1e-15);
}

TEST_CASE("product_state basis cases") {
  const TwoQubitState ud = product_state(spin_up, spin_down);
  CHECK(ud.amplitude(0) == Complex(0.0));
  CHECK(ud.amplitude(1) == Complex(1.0));
  CHECK(ud.amplitude(2) == Complex(0.0));
  CHECK(ud.amplitude(3) == Complex(0.0));

  const TwoQubitState uu = product_state(spin_up, spin_up);
  CHECK(uu.amplitude(0) == Complex(1.0));
  CHECK(uu.amplitude(1) == Complex(0.0));
}

TEST_CASE("product_state of a superposed spinor") {
  const Spinor plus{Complex(kInvSqrt2), Complex(kInvSqrt2)};
  const TwoQubitState psi = product_state(plus, spin_up);
  // outer product by hand: (1/sqrt2, 0, 1/sqrt2, 0)
  CHECK(std::abs(psi.amplitude(0) - Complex(kInvSqrt2)) <= 1e-15);
  CHECK(std::abs(psi.amplitude(1)) <= 1e-15);
  CHECK(std::abs(psi.amplitude(2) - Complex(kInvSqrt2)) <= 1e-15);
  CHECK(std::abs(psi.amplitude(3)) <= 1e-15);
}

TEST_CASE("product_state rejects non-normalized spinors") {
  const Spinor bad{Complex(1.0), Complex(0.5)};
  CHECK_THROWS_AS(product_state(bad, spin_up), std::invalid_argument);
  CHECK_THROWS_AS(product_state(spin_up, bad), std::invalid_argument);
}

TEST_CASE("expectation basics") {
  SampleStream s(103, 0);
  for (int i = 0; i < 50; ++i)
    REQUIRE(std::abs(expectation(bell_test::random_state(s), ComplexMatrix::identity(4)) -
                     1.0) <= 1e-12);

  const ComplexMatrix zz = tensor(pauli_z(), pauli_z());
  CHECK(std::abs(expectation(singlet(), zz) - (-1.0)) <= 1e-12);
  CHECK(expectation(product_state(spin_up, spin_down), zz) == -1.0);
}

TEST_CASE("expectation rejects bad operators") {
  ComplexMatrix not_hermitian = ComplexMatrix::identity(4);
  not_hermitian(0, 1) = Complex(0.0, 1.0);
  CHECK_THROWS_AS(expectation(singlet(), not_hermitian), std::invalid_argument);
  CHECK_THROWS_AS(expectation(singlet(), ComplexMatrix::identity(2)), std::invalid_argument);
}

TEST_CASE("density_from_pure basis projector and singlet block") {
  const DensityMatrix ud = density_from_pure(product_state(spin_up, spin_down));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      REQUIRE(std::abs(ud.matrix()(i, j) - (i == 1 && j == 1 ? Complex(1.0) : Complex(0.0))) ==
              0.0);

  const DensityMatrix rho = density_from_pure(singlet());
  // outer product computed by hand from the amplitudes
  const auto amps = singlet().amplitudes();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      REQUIRE(std::abs(rho.matrix()(i, j) - amps[i] * std::conj(amps[j])) <= 1e-15);
  CHECK(std::abs(rho.matrix()(1, 1) - Complex(0.5)) <= 1e-15);
  CHECK(std::abs(rho.matrix()(2, 2) - Complex(0.5)) <= 1e-15);
  CHECK(std::abs(rho.matrix()(1, 2) - Complex(-0.5)) <= 1e-15);
  CHECK(std::abs(rho.matrix()(2, 1) - Complex(-0.5)) <= 1e-15);
}

TEST_CASE("density_from_pure is idempotent with unit trace") {
  SampleStream s(104, 0);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = density_from_pure(bell_test::random_state(s));
    REQUIRE(std::abs(rho.matrix().trace() - Complex(1.0)) <= 1e-15);
    REQUIRE((rho.matrix() * rho.matrix()).distance_to(rho.matrix()) <= 1e-12);
  }
}

TEST_CASE("expectation agrees with the trace form") {
  SampleStream s(105, 0);
  for (int i = 0; i < 100; ++i) {
    const TwoQubitState psi = bell_test::random_state(s);
    const ComplexMatrix op = bell_test::random_hermitian4(s);
    const ComplexMatrix rho = density_from_pure(psi).matrix();
    Complex tr = 0.0;
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) tr += rho(r, c) * op(c, r);
    REQUIRE(std::abs(expectation(psi, op) - tr.real()) <= 1e-12);
    REQUIRE(std::abs(tr.imag()) <= 1e-12);
  }
}

TEST_CASE("Direction construction") {
  CHECK_THROWS_AS(Direction(1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(Direction::normalized(0, 0, 0), std::invalid_argument);
  const Direction d = Direction::normalized(1, 1, 1);
  CHECK(std::abs(dot(d, d) - 1.0) <= 1e-15);
  const Direction e = Direction::xz_plane(deg_to_rad(60.0));
  CHECK(std::abs(e.x() - std::sin(deg_to_rad(60.0))) == 0.0);
  CHECK(e.y() == 0.0);
  CHECK(std::abs(e.z() - 0.5) <= 1e-15);
}

TEST_CASE("TwoQubitState validates its norm") {
  CHECK_THROWS_AS(TwoQubitState({Complex(1.0), Complex(1.0), Complex(0.0), Complex(0.0)}),
                  std::invalid_argument);
  const TwoQubitState psi =
      TwoQubitState::normalized({Complex(1.0), Complex(1.0), Complex(0.0), Complex(0.0)});
  CHECK(std::abs(psi.amplitude(0) - Complex(0.7071067811865476)) <= 1e-15);
}

TEST_CASE("DensityMatrix rejects invalid candidates") {
  ComplexMatrix not_hermitian = Complex(0.25) * ComplexMatrix::identity(4);
  not_hermitian(0, 1) = Complex(0.0, 0.3);
  CHECK_THROWS_AS(DensityMatrix(not_hermitian), std::invalid_argument);

  CHECK_THROWS_AS(DensityMatrix(Complex(0.5) * ComplexMatrix::identity(4)),
                  std::invalid_argument);  // trace 2

  ComplexMatrix indefinite(4, 4);  // Hermitian, trace 1, eigenvalue -0.5
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(indefinite), std::invalid_argument);

  CHECK_NOTHROW(DensityMatrix::maximally_mixed());
}

TEST_CASE("DensityMatrix accepts boundary rank-1 projectors") {
  SampleStream s(106, 0);
  for (int i = 0; i < 50; ++i) CHECK_NOTHROW(density_from_pure(bell_test::random_state(s)));
}

TEST_CASE("to_real guards the imaginary residue") {
  CHECK(to_real(Complex(0.5, 1e-12)) == 0.5);
  CHECK_THROWS_AS(to_real(Complex(0.5, 1e-3)), std::runtime_error);
}

TEST_CASE("spinor brackets of the basis states") {
  CHECK(spinor_bracket(spin_up, pauli_z(), spin_up) == Complex(1.0));
  CHECK(spinor_bracket(spin_down, pauli_z(), spin_down) == Complex(-1.0));
  CHECK(spinor_bracket(spin_up, pauli_x(), spin_down) == Complex(1.0));
  CHECK(spinor_bracket(spin_up, pauli_y(), spin_down) == Complex(0.0, -1.0));
}
