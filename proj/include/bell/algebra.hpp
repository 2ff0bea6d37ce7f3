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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bell/rng.hpp"

namespace bell {

using Complex = std::complex<double>;

/// Tolerances used across the library.  Structural checks (Hermiticity,
/// normalization, traces) are held to 1e-12; user-supplied vectors and
/// spinors only to 1e-9; density-matrix positivity to -1e-10.
inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kInputNormTol = 1e-9;
inline constexpr double kImagResidueTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace detail

/// Extracts the real part of a contraction that must be real up to float
/// noise.  Throws if the imaginary residue exceeds `tol`.
inline double to_real(Complex z, double tol = kImagResidueTol) {
  if (std::abs(z.imag()) > tol)
    throw std::runtime_error("expected a real value, imaginary residue " +
                             std::to_string(z.imag()));
  return z.real();
}

/// Dense row-major complex matrix.  Everything in this library is 2x2 or
/// 4x4, so no attempt is made at being clever about storage or algorithms.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {
    detail::require(rows > 0 && cols > 0, "ComplexMatrix: empty shape");
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
      : rows_(rows.size()), cols_(rows.begin()->size()) {
    detail::require(rows_ > 0 && cols_ > 0, "ComplexMatrix: empty shape");
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      detail::require(row.size() == cols_, "ComplexMatrix: ragged rows");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) {
    return entries_[r * cols_ + c];
  }
  Complex operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  Complex trace() const {
    detail::require(rows_ == cols_, "trace: matrix is not square");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  bool is_hermitian(double tol = kStructuralTol) const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = r; c < cols_; ++c)
        if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
  }

  /// Largest entrywise |difference| to another matrix of the same shape.
  double distance_to(const ComplexMatrix& other) const {
    detail::require(rows_ == other.rows_ && cols_ == other.cols_,
                    "distance_to: shape mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i)
      d = std::max(d, std::abs(entries_[i] - other.entries_[i]));
    return d;
  }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "operator+: shape mismatch");
    ComplexMatrix m = a;
    for (std::size_t i = 0; i < m.entries_.size(); ++i) m.entries_[i] += b.entries_[i];
    return m;
  }

  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "operator-: shape mismatch");
    ComplexMatrix m = a;
    for (std::size_t i = 0; i < m.entries_.size(); ++i) m.entries_[i] -= b.entries_[i];
    return m;
  }

  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    ComplexMatrix m = a;
    for (auto& e : m.entries_) e *= s;
    return m;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, Complex s) { return s * a; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require(a.cols_ == b.rows_, "operator*: inner dimensions differ");
    ComplexMatrix m(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex arc = a(r, k);
        for (std::size_t c = 0; c < b.cols_; ++c) m(r, c) += arc * b(k, c);
      }
    return m;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Complex> entries_;
};

/// Unit vector in ordinary three-space.  The checked constructor rejects
/// anything more than 1e-9 away from unit norm; `normalized` rescales.
class Direction {
 public:
  Direction(double x, double y, double z) : x_(x), y_(y), z_(z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    detail::require(std::abs(n - 1.0) <= kInputNormTol,
                    "Direction: |v| = " + std::to_string(n) +
                        " is not 1; use Direction::normalized");
  }

  static Direction normalized(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    detail::require(n > 1e-300, "Direction::normalized: zero vector");
    return Direction(x / n, y / n, z / n);
  }

  /// Direction at `angle_rad` from +z inside the xz-plane: (sin, 0, cos).
  static Direction xz_plane(double angle_rad) {
    return Direction(std::sin(angle_rad), 0.0, std::cos(angle_rad));
  }

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

 private:
  double x_, y_, z_;
};

inline double dot(const Direction& u, const Direction& v) {
  return u.x() * v.x() + u.y() * v.y() + u.z() * v.z();
}

inline double angle_between(const Direction& u, const Direction& v) {
  const double c = std::clamp(dot(u, v), -1.0, 1.0);
  return std::acos(c);
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Single-particle spin state in the {up, down} basis.
using Spinor = std::array<Complex, 2>;

inline const Spinor spin_up{Complex(1.0), Complex(0.0)};
inline const Spinor spin_down{Complex(0.0), Complex(1.0)};

/// <bra| m |ket> for a 2x2 operator.
inline Complex spinor_bracket(const Spinor& bra, const ComplexMatrix& m, const Spinor& ket) {
  detail::require(m.rows() == 2 && m.cols() == 2, "spinor_bracket: operator must be 2x2");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) acc += std::conj(bra[i]) * m(i, j) * ket[j];
  return acc;
}

inline const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
  return m;
}

inline const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
  return m;
}

inline const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
  return m;
}

/// sigma . d: the spin projection along `d`.  Hermitian, traceless,
/// eigenvalues +1 and -1.
inline ComplexMatrix pauli_dot(const Direction& d) {
  ComplexMatrix m(2, 2);
  m(0, 0) = d.z();
  m(0, 1) = Complex(d.x(), -d.y());
  m(1, 0) = Complex(d.x(), d.y());
  m(1, 1) = -d.z();
  return m;
}

/// Kronecker product of two 2x2 operators in the (uu, ud, du, dd) basis
/// ordering: the joint-space operator for simultaneous measurements.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require(a.rows() == 2 && a.cols() == 2 && b.rows() == 2 && b.cols() == 2,
                  "tensor: both factors must be 2x2");
  ComplexMatrix m(4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return m;
}

/// Normalized two-spin state with amplitudes ordered (uu, ud, du, dd).
class TwoQubitState {
 public:
  explicit TwoQubitState(const std::array<Complex, 4>& amplitudes)
      : amps_(amplitudes) {
    double n2 = 0.0;
    for (const auto& a : amps_) n2 += std::norm(a);
    detail::require(std::abs(n2 - 1.0) <= kStructuralTol,
                    "TwoQubitState: squared norm " + std::to_string(n2) +
                        " is not 1; use TwoQubitState::normalized");
  }

  static TwoQubitState normalized(const std::array<Complex, 4>& amplitudes) {
    double n2 = 0.0;
    for (const auto& a : amplitudes) n2 += std::norm(a);
    detail::require(n2 > 1e-300, "TwoQubitState::normalized: zero vector");
    const double inv = 1.0 / std::sqrt(n2);
    std::array<Complex, 4> scaled = amplitudes;
    for (auto& a : scaled) a *= inv;
    return TwoQubitState(scaled);
  }

  const std::array<Complex, 4>& amplitudes() const { return amps_; }
  Complex amplitude(std::size_t i) const { return amps_.at(i); }

  /// The same state with the two particles exchanged.
  TwoQubitState swapped() const {
    return TwoQubitState({amps_[0], amps_[2], amps_[1], amps_[3]});
  }

 private:
  std::array<Complex, 4> amps_;
};

/// The maximally entangled singlet (ud - du)/sqrt(2).
inline TwoQubitState singlet() {
  const double r = std::sqrt(0.5);
  return TwoQubitState({0.0, Complex(r), Complex(-r), 0.0});
}

/// Product state chi_A (x) chi_B.  Both spinors must be normalized to 1e-9.
inline TwoQubitState product_state(const Spinor& chi_a, const Spinor& chi_b) {
  for (const Spinor* chi : {&chi_a, &chi_b}) {
    const double n2 = std::norm((*chi)[0]) + std::norm((*chi)[1]);
    detail::require(std::abs(std::sqrt(n2) - 1.0) <= kInputNormTol,
                    "product_state: spinor is not normalized");
  }
  std::array<Complex, 4> amps;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) amps[2 * i + j] = chi_a[i] * chi_b[j];
  return TwoQubitState::normalized(amps);
}

/// <psi| op |psi> for a Hermitian 4x4 operator.  The contraction's
/// imaginary residue must stay below 1e-10; it is checked and discarded.
inline double expectation(const TwoQubitState& psi, const ComplexMatrix& op) {
  detail::require(op.rows() == 4 && op.cols() == 4, "expectation: operator must be 4x4");
  detail::require(op.is_hermitian(), "expectation: operator is not Hermitian");
  const auto& a = psi.amplitudes();
  Complex acc = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) acc += std::conj(a[i]) * op(i, j) * a[j];
  return to_real(acc);
}

namespace detail {

using Vec4 = std::array<Complex, 4>;

inline Vec4 apply4(const ComplexMatrix& m, const Vec4& v) {
  Vec4 out{};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) out[r] += m(r, c) * v[c];
  return out;
}

inline double rayleigh(const ComplexMatrix& m, const Vec4& v) {
  const Vec4 mv = apply4(m, v);
  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    num += std::conj(v[i]) * mv[i];
    den += std::norm(v[i]);
  }
  return num.real() / den;
}

/// Deterministic set of 64 probe vectors: the basis states, all real and
/// imaginary two-state superpositions, then hash-generated fillers.
inline const std::vector<Vec4>& psd_probes() {
  static const std::vector<Vec4> probes = [] {
    std::vector<Vec4> out;
    const double r = 1.0 / std::numbers::sqrt2;
    for (std::size_t i = 0; i < 4; ++i) {
      Vec4 v{};
      v[i] = 1.0;
      out.push_back(v);
    }
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j)
        for (const Complex phase : {Complex(1.0), Complex(-1.0), Complex(0.0, 1.0),
                                    Complex(0.0, -1.0)}) {
          Vec4 v{};
          v[i] = r;
          v[j] = r * phase;
          out.push_back(v);
        }
    SampleStream stream(0xba11ab5u, 0);
    while (out.size() < 64) {
      Vec4 v{};
      double n2 = 0.0;
      for (auto& e : v) {
        e = Complex(2.0 * stream.next_unit() - 1.0, 2.0 * stream.next_unit() - 1.0);
        n2 += std::norm(e);
      }
      const double inv = 1.0 / std::sqrt(n2);
      for (auto& e : v) e *= inv;
      out.push_back(v);
    }
    return out;
  }();
  return probes;
}

/// Smallest-eigenvalue estimate for a Hermitian 4x4 matrix without a
/// general eigensolver: probe Rayleigh quotients give upper bounds, and
/// power iteration on (c I - h) pins the bottom of the spectrum.
inline double smallest_eigenvalue(const ComplexMatrix& h) {
  double gersh = 0.0;
  for (std::size_t r = 0; r < 4; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < 4; ++c) row += std::abs(h(r, c));
    gersh = std::max(gersh, row);
  }
  const double c = gersh + 1.0;
  ComplexMatrix shifted = c * ComplexMatrix::identity(4) - h;

  double best = std::numeric_limits<double>::infinity();
  Vec4 best_probe{};
  for (const auto& v : psd_probes()) {
    const double q = rayleigh(h, v);
    if (q < best) {
      best = q;
      best_probe = v;
    }
  }

  Vec4 start2{Complex(0.5, 0.1), Complex(-0.3, 0.4), Complex(0.2, -0.6), Complex(0.1, 0.2)};
  for (const Vec4& start : {best_probe, start2}) {
    Vec4 v = start;
    for (int it = 0; it < 256; ++it) {
      v = apply4(shifted, v);
      double n2 = 0.0;
      for (const auto& e : v) n2 += std::norm(e);
      if (n2 < 1e-300) break;  // h == c I, any vector is extremal
      const double inv = 1.0 / std::sqrt(n2);
      for (auto& e : v) e *= inv;
    }
    best = std::min(best, rayleigh(h, v));
  }
  return best;
}

}  // namespace detail

/// 4x4 density operator: Hermitian to 1e-12, unit trace to 1e-12, and
/// positive semidefinite up to a -1e-10 eigenvalue floor.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
    detail::require(rho_.rows() == 4 && rho_.cols() == 4, "DensityMatrix: must be 4x4");
    detail::require(rho_.is_hermitian(), "DensityMatrix: not Hermitian");
    detail::require(std::abs(rho_.trace() - Complex(1.0)) <= kStructuralTol,
                    "DensityMatrix: trace is not 1");
    detail::require(detail::smallest_eigenvalue(rho_) >= -kPsdTol,
                    "DensityMatrix: not positive semidefinite");
  }

  static DensityMatrix maximally_mixed() {
    return DensityMatrix(Complex(0.25) * ComplexMatrix::identity(4));
  }

  const ComplexMatrix& matrix() const { return rho_; }

 private:
  ComplexMatrix rho_;
};

/// |psi><psi| as a density operator.
inline DensityMatrix density_from_pure(const TwoQubitState& psi) {
  const auto& a = psi.amplitudes();
  ComplexMatrix rho(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) rho(i, j) = a[i] * std::conj(a[j]);
  return DensityMatrix(std::move(rho));
}

}  // namespace bell
