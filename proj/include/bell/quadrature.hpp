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
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bell {

struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].  Newton iteration on the
/// Legendre recurrence, symmetric nodes filled in pairs.
inline QuadratureRule1D gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 1; i <= m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) - 0.25) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / static_cast<double>(j);
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    rule.nodes[i - 1] = -z;
    rule.nodes[n - i] = z;
    rule.weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - i] = rule.weights[i - 1];
  }
  return rule;
}

/// A quadrature node on the unit sphere.  Weights sum to 1, i.e. the rule
/// integrates against the uniform measure dOmega / 4pi.
struct SphereNode {
  double x, y, z;
  double weight;
};

/// Product rule over the sphere: Gauss-Legendre in z = cos(theta) crossed
/// with an n-point uniform (periodic trapezoid) rule in phi.  Exact for
/// low-order spherical polynomials.
inline std::vector<SphereNode> sphere_product_rule(std::size_t nodes_per_dim) {
  if (nodes_per_dim < 8)
    throw std::invalid_argument("sphere_product_rule: need at least 8 nodes per dimension");
  const QuadratureRule1D gl = gauss_legendre(nodes_per_dim);
  const std::size_t n = nodes_per_dim;
  std::vector<SphereNode> nodes;
  nodes.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double z = gl.nodes[j];
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double w = gl.weights[j] / (2.0 * static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
      nodes.push_back({r * std::cos(phi), r * std::sin(phi), z, w});
    }
  }
  return nodes;
}

}  // namespace bell
