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

#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "bell/algebra.hpp"
#include "bell/quadrature.hpp"
#include "bell/quantum.hpp"
#include "bell/rng.hpp"

namespace bell {

/// Uniform point on the unit sphere from two stream variates.
inline Direction sample_unit_sphere(SampleStream& stream) {
  const double z = 2.0 * stream.next_unit() - 1.0;
  const double phi = 2.0 * std::numbers::pi * stream.next_unit();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Direction(r * std::cos(phi), r * std::sin(phi), z);
}

/// A point in a model's hidden-variable space: either a sphere direction
/// (the default space) or an index into a finite set of atoms.
struct HiddenVariable {
  std::variant<Direction, std::size_t> value;

  bool is_point() const { return std::holds_alternative<Direction>(value); }
  const Direction& point() const { return std::get<Direction>(value); }
  std::size_t index() const { return std::get<std::size_t>(value); }

  std::string describe() const {
    std::ostringstream os;
    if (is_point()) {
      const Direction& d = point();
      os << "(" << d.x() << ", " << d.y() << ", " << d.z() << ")";
    } else {
      os << "atom #" << index();
    }
    return os.str();
  }
};

enum class LambdaSpace { UnitSphere, FinitePoints };

/// A local hidden-variable model: a lambda distribution plus two local
/// outcome functions.  outcome_a never sees b's setting and outcome_b
/// never sees a's — locality is structural in the signature.  Outcomes
/// may be deterministic +/-1 or any expectation value in [-1, 1].
struct HiddenVariableModel {
  std::string name;
  LambdaSpace space = LambdaSpace::UnitSphere;
  /// FinitePoints only: relative sampling weights of the atoms.
  std::vector<double> point_weights;
  std::function<HiddenVariable(SampleStream&)> sample_lambda;
  std::function<double(const Direction&, const HiddenVariable&)> outcome_a;
  std::function<double(const Direction&, const HiddenVariable&)> outcome_b;
};

struct IntegrationConfig {
  enum class Method { MonteCarlo, SphereQuadrature };
  Method method = Method::MonteCarlo;
  /// Monte Carlo sample count, or nodes per dimension (>= 8) for quadrature.
  std::uint64_t sample_count = 100000;
  std::uint64_t seed = 1;
  double confidence_sigma = 3.0;
  unsigned threads = 0;  // 0 = one worker per hardware thread
};

inline void validate(const IntegrationConfig& cfg) {
  detail::require(cfg.sample_count >= 1, "IntegrationConfig: sample_count must be >= 1");
  if (cfg.method == IntegrationConfig::Method::SphereQuadrature)
    detail::require(cfg.sample_count >= 8,
                    "IntegrationConfig: quadrature needs >= 8 nodes per dimension");
  detail::require(cfg.confidence_sigma > 0.0,
                  "IntegrationConfig: confidence_sigma must be positive");
}

enum class EstimateMethod { MonteCarlo, SphereQuadrature, Exact };

inline std::string_view to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::MonteCarlo: return "monte-carlo";
    case EstimateMethod::SphereQuadrature: return "quadrature";
    case EstimateMethod::Exact: return "exact";
  }
  return "unknown";
}

struct CorrelationEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // 0 for quadrature and exact sums
  std::uint64_t sample_count = 0;
  EstimateMethod method = EstimateMethod::Exact;
};

namespace detail {

/// Reduction granularity for Monte Carlo sums.  Per-chunk partial sums are
/// accumulated serially in sample-index order and then combined serially in
/// chunk order, so the reported mean is bit-identical at every thread count.
inline constexpr std::uint64_t kMonteCarloChunk = 4096;

inline constexpr double kOutcomeRangeTol = 1e-9;

inline double checked_outcome_product(const HiddenVariableModel& model,
                                      const Direction& a, const Direction& b,
                                      const HiddenVariable& lambda) {
  const double va = model.outcome_a(a, lambda);
  const double vb = model.outcome_b(b, lambda);
  for (const auto& [side, v] : {std::pair{'A', va}, std::pair{'B', vb}}) {
    if (!(std::abs(v) <= 1.0 + kOutcomeRangeTol))
      throw std::runtime_error("model '" + model.name + "': outcome " + side +
                               std::string(" = ") + std::to_string(v) +
                               " outside [-1, 1] at lambda = " + lambda.describe());
  }
  return va * vb;
}

}  // namespace detail

/// Hidden-variable correlation P(a,b): the lambda-average of the product
/// of local outcomes.  Monte Carlo draws lambda_i from per-sample counter
/// streams, so the result depends only on (seed, sample_count); quadrature
/// integrates the default sphere space exactly up to rule order and finite
/// atom sets exactly.
inline CorrelationEstimate lhv_correlation(const HiddenVariableModel& model,
                                           const Direction& a, const Direction& b,
                                           const IntegrationConfig& cfg) {
  validate(cfg);

  if (cfg.method == IntegrationConfig::Method::MonteCarlo) {
    const std::uint64_t n = cfg.sample_count;
    const std::uint64_t n_chunks = (n + detail::kMonteCarloChunk - 1) / detail::kMonteCarloChunk;
    std::vector<std::array<double, 2>> partial(n_chunks, {0.0, 0.0});

    std::atomic<std::uint64_t> next_chunk{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
      try {
        for (;;) {
          const std::uint64_t c = next_chunk.fetch_add(1);
          if (c >= n_chunks) return;
          const std::uint64_t begin = c * detail::kMonteCarloChunk;
          const std::uint64_t end = std::min(n, begin + detail::kMonteCarloChunk);
          double sum = 0.0, sum_sq = 0.0;
          for (std::uint64_t i = begin; i < end; ++i) {
            SampleStream stream(cfg.seed, i);
            const HiddenVariable lambda = model.sample_lambda(stream);
            const double x = detail::checked_outcome_product(model, a, b, lambda);
            sum += x;
            sum_sq += x * x;
          }
          partial[c] = {sum, sum_sq};
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next_chunk.store(n_chunks);
      }
    };

    unsigned workers = cfg.threads != 0 ? cfg.threads
                                        : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_chunks));
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    double sum = 0.0, sum_sq = 0.0;
    for (const auto& p : partial) {
      sum += p[0];
      sum_sq += p[1];
    }
    const double mean = sum / static_cast<double>(n);
    const double variance =
        n > 1 ? std::max(0.0, (sum_sq - static_cast<double>(n) * mean * mean) /
                                  static_cast<double>(n - 1))
              : 0.0;
    return {mean, std::sqrt(variance / static_cast<double>(n)), n,
            EstimateMethod::MonteCarlo};
  }

  if (model.space == LambdaSpace::FinitePoints) {
    // The lambda-integral over a finite atom set is just the weighted sum.
    detail::require(!model.point_weights.empty(),
                    "lhv_correlation: finite-space model has no atoms");
    double total = 0.0;
    for (const double w : model.point_weights) total += w;
    detail::require(total > 0.0, "lhv_correlation: atom weights must sum to > 0");
    double mean = 0.0;
    for (std::size_t i = 0; i < model.point_weights.size(); ++i) {
      const HiddenVariable lambda{i};
      mean += model.point_weights[i] / total *
              detail::checked_outcome_product(model, a, b, lambda);
    }
    return {mean, 0.0, model.point_weights.size(), EstimateMethod::Exact};
  }

  const auto rule = sphere_product_rule(static_cast<std::size_t>(cfg.sample_count));
  double mean = 0.0;
  for (const SphereNode& node : rule) {
    const HiddenVariable lambda{Direction(node.x, node.y, node.z)};
    mean += node.weight * detail::checked_outcome_product(model, a, b, lambda);
  }
  return {mean, 0.0, rule.size(), EstimateMethod::SphereQuadrature};
}

/// A lambda-conditioned decomposition of a two-particle state: each atom
/// carries a weight (used exactly as written, even when the weights do not
/// sum to 1) and the pair of single-particle averages conditioned on it.
class LambdaConditionedFamily {
 public:
  struct Term {
    double weight;
    std::function<double(const Direction&)> marginal_a;
    std::function<double(const Direction&)> marginal_b;
  };

  LambdaConditionedFamily(std::string name, std::vector<Term> terms,
                          std::optional<TwoQubitState> decomposed = std::nullopt)
      : name_(std::move(name)), terms_(std::move(terms)), decomposed_(std::move(decomposed)) {
    detail::require(!terms_.empty(), "LambdaConditionedFamily: no terms");
  }

  /// The one-atom family of `state` itself: marginals are the state's own
  /// single-particle averages, weight 1.
  static LambdaConditionedFamily one_point(const TwoQubitState& state) {
    std::vector<Term> terms;
    terms.push_back({1.0,
                     [state](const Direction& d) { return qm_marginal(state, d, Side::A); },
                     [state](const Direction& d) { return qm_marginal(state, d, Side::B); }});
    return LambdaConditionedFamily("one-point", std::move(terms), state);
  }

  /// The four z-basis product atoms (A,B) = (u,d), (d,d), (u,u), (d,u),
  /// each with coefficient 1/2, decomposing the singlet.  Note the weights
  /// sum to 2, not 1; they are used literally.
  static LambdaConditionedFamily singlet_basis_terms() {
    auto basis_marginal = [](const Spinor& chi) {
      return [chi](const Direction& d) {
        return to_real(spinor_bracket(chi, pauli_dot(d), chi));
      };
    };
    std::vector<Term> terms;
    for (const auto& [chi_a, chi_b] :
         {std::pair{spin_up, spin_down}, std::pair{spin_down, spin_down},
          std::pair{spin_up, spin_up}, std::pair{spin_down, spin_up}}) {
      terms.push_back({0.5, basis_marginal(chi_a), basis_marginal(chi_b)});
    }
    return LambdaConditionedFamily("singlet-basis-terms", std::move(terms), singlet());
  }

  const std::string& name() const { return name_; }
  const std::vector<Term>& terms() const { return terms_; }
  const std::optional<TwoQubitState>& decomposed_state() const { return decomposed_; }

 private:
  std::string name_;
  std::vector<Term> terms_;
  std::optional<TwoQubitState> decomposed_;
};

/// Product-of-marginals correlation: the lambda-average of
/// <sigma.a>(lambda) * <sigma.b>(lambda) under `family`.  This replaces the
/// joint operator average by a product of single-particle averages, which
/// erases any correlation between the two sides.  All shipped families are
/// finite, so the integral reduces to the exact weighted sum and `cfg` is
/// not consulted.
inline CorrelationEstimate bell_product_expectation(
    const TwoQubitState& state, const LambdaConditionedFamily& family,
    const Direction& a, const Direction& b, const IntegrationConfig& cfg = {}) {
  (void)cfg;
  if (family.decomposed_state()) {
    const auto& expected = family.decomposed_state()->amplitudes();
    const auto& actual = state.amplitudes();
    for (std::size_t i = 0; i < 4; ++i) {
      if (std::abs(expected[i] - actual[i]) > kInputNormTol)
        throw std::invalid_argument("bell_product_expectation: family '" + family.name() +
                                    "' does not decompose the supplied state");
    }
  }
  double acc = 0.0;
  for (const auto& term : family.terms())
    acc += term.weight * term.marginal_a(a) * term.marginal_b(b);
  return {acc, 0.0, family.terms().size(), EstimateMethod::Exact};
}

/// The literal four-term basis-mixture sum for the singlet,
///   1/2 [ <u|sa|u><d|sb|d> + <d|sa|d><d|sb|d>
///       + <u|sa|u><u|sb|u> + <d|sa|d><u|sb|u> ],
/// with lambda-independent brackets.  Factors as
/// 1/2 tr(sigma.a) tr(sigma.b) and therefore vanishes identically.
inline double singlet_basis_mixture_expectation(const Direction& a, const Direction& b) {
  const ComplexMatrix sa = pauli_dot(a);
  const ComplexMatrix sb = pauli_dot(b);
  const Complex uu_a = spinor_bracket(spin_up, sa, spin_up);
  const Complex dd_a = spinor_bracket(spin_down, sa, spin_down);
  const Complex uu_b = spinor_bracket(spin_up, sb, spin_up);
  const Complex dd_b = spinor_bracket(spin_down, sb, spin_down);
  return to_real(0.5 * (uu_a * dd_b + dd_a * dd_b + uu_a * uu_b + dd_a * uu_b));
}

/// The singlet correlation assembled from 2x2 brackets including the two
/// cross terms,
///   1/2 [ <u|sa|u><d|sb|d> - <u|sa|d><d|sb|u>
///       - <d|sa|u><u|sb|d> + <d|sa|d><u|sb|u> ].
/// Equals qm_correlation(singlet(), a, b) = -a.b.
inline double singlet_qm_decomposition(const Direction& a, const Direction& b) {
  const ComplexMatrix sa = pauli_dot(a);
  const ComplexMatrix sb = pauli_dot(b);
  const Complex uu_a = spinor_bracket(spin_up, sa, spin_up);
  const Complex ud_a = spinor_bracket(spin_up, sa, spin_down);
  const Complex du_a = spinor_bracket(spin_down, sa, spin_up);
  const Complex dd_a = spinor_bracket(spin_down, sa, spin_down);
  const Complex uu_b = spinor_bracket(spin_up, sb, spin_up);
  const Complex ud_b = spinor_bracket(spin_up, sb, spin_down);
  const Complex du_b = spinor_bracket(spin_down, sb, spin_up);
  const Complex dd_b = spinor_bracket(spin_down, sb, spin_down);
  return to_real(0.5 * (uu_a * dd_b - ud_a * du_b - du_a * ud_b + dd_a * uu_b));
}

/// Joint probability table over the four (+/-1, +/-1) outcome pairs.
/// Index 0 is the +1 outcome, index 1 the -1 outcome.
class JointOutcomeTable {
 public:
  explicit JointOutcomeTable(const std::array<std::array<double, 2>, 2>& cells)
      : cells_(cells) {
    double total = 0.0;
    for (auto& row : cells_)
      for (double& p : row) {
        detail::require(p >= -kStructuralTol, "JointOutcomeTable: negative probability");
        p = std::max(p, 0.0);
        total += p;
      }
    detail::require(std::abs(total - 1.0) <= kStructuralTol,
                    "JointOutcomeTable: probabilities sum to " + std::to_string(total));
  }

  double cell(std::size_t i, std::size_t j) const { return cells_.at(i).at(j); }
  double marginal_a(std::size_t i) const { return cells_.at(i)[0] + cells_.at(i)[1]; }
  double marginal_b(std::size_t j) const { return cells_[0].at(j) + cells_[1].at(j); }

 private:
  std::array<std::array<double, 2>, 2> cells_;
};

/// Outcome table of joint spin measurements along a and b:
/// p(A,B) = <psi| P_A(a) (x) P_B(b) |psi> with P_± = (I ± sigma.d)/2.
inline JointOutcomeTable joint_outcome_table(const TwoQubitState& psi, const Direction& a,
                                             const Direction& b) {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const auto projector = [&](const Direction& d, std::size_t idx) {
    const Complex sign = idx == 0 ? 1.0 : -1.0;
    return Complex(0.5) * (id + sign * pauli_dot(d));
  };
  std::array<std::array<double, 2>, 2> cells{};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      cells[i][j] = expectation(psi, tensor(projector(a, i), projector(b, j)));
  return JointOutcomeTable(cells);
}

struct FactorizationReport {
  bool product_factorizes = false;
  double product_residual = 0.0;     // max |p(A,B) - p_A(A) p_B(B)|
  double chain_rule_residual = 0.0;  // max |p(A,B) - p(A|B) p_B(B)|
  double tolerance = 0.0;
};

/// Contrast of the two factorizations of a joint outcome table: the
/// product of setting-conditioned marginals (which fails whenever the
/// outcomes are correlated) against the chain rule p(A|B) p(B) (an
/// identity, reported to make the contrast concrete).  Cells whose B
/// marginal vanishes contribute nothing to the chain-rule residual.
inline FactorizationReport factorization_check(const JointOutcomeTable& joint,
                                               double tolerance = 1e-9) {
  detail::require(tolerance > 0.0, "factorization_check: tolerance must be positive");
  FactorizationReport report;
  report.tolerance = tolerance;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const double p = joint.cell(i, j);
      const double product = joint.marginal_a(i) * joint.marginal_b(j);
      report.product_residual = std::max(report.product_residual, std::abs(p - product));
      const double pb = joint.marginal_b(j);
      if (pb > 0.0) {
        const double chained = (p / pb) * pb;
        report.chain_rule_residual =
            std::max(report.chain_rule_residual, std::abs(p - chained));
      }
    }
  report.product_factorizes = report.product_residual <= tolerance;
  return report;
}

// ---------------------------------------------------------------------------
// Model zoo
// ---------------------------------------------------------------------------

/// Deterministic sphere model: A = sign(a.lambda), B = -sign(b.lambda),
/// lambda uniform on the sphere.  Closed form: P(a,b) = -1 + 2 theta / pi.
inline HiddenVariableModel make_sign_model() {
  HiddenVariableModel model;
  model.name = "sign-model";
  model.space = LambdaSpace::UnitSphere;
  model.sample_lambda = [](SampleStream& s) { return HiddenVariable{sample_unit_sphere(s)}; };
  const auto sign = [](double x) { return x >= 0.0 ? 1.0 : -1.0; };
  model.outcome_a = [sign](const Direction& a, const HiddenVariable& lambda) {
    return sign(dot(a, lambda.point()));
  };
  model.outcome_b = [sign](const Direction& b, const HiddenVariable& lambda) {
    return -sign(dot(b, lambda.point()));
  };
  return model;
}

/// Setting-independent model A = +1, B = -1 on a one-atom lambda space.
inline HiddenVariableModel make_trivial_model() {
  HiddenVariableModel model;
  model.name = "trivial";
  model.space = LambdaSpace::FinitePoints;
  model.point_weights = {1.0};
  model.sample_lambda = [](SampleStream&) { return HiddenVariable{std::size_t{0}}; };
  model.outcome_a = [](const Direction&, const HiddenVariable&) { return 1.0; };
  model.outcome_b = [](const Direction&, const HiddenVariable&) { return -1.0; };
  return model;
}

/// Wraps a lambda-conditioned family as a hidden-variable model whose
/// outcomes are the conditioned single-particle averages (expectation-
/// valued outcomes).  Atoms are sampled with probability proportional to
/// their weights.
inline HiddenVariableModel make_marginal_product_model(LambdaConditionedFamily family) {
  HiddenVariableModel model;
  model.name = "marginal-product(" + family.name() + ")";
  model.space = LambdaSpace::FinitePoints;
  double total = 0.0;
  for (const auto& term : family.terms()) {
    detail::require(term.weight >= 0.0,
                    "make_marginal_product_model: negative atom weight");
    model.point_weights.push_back(term.weight);
    total += term.weight;
  }
  detail::require(total > 0.0, "make_marginal_product_model: weights must sum to > 0");
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const double w : model.point_weights) {
    acc += w / total;
    cumulative.push_back(acc);
  }
  cumulative.back() = 1.0;

  auto terms = std::make_shared<std::vector<LambdaConditionedFamily::Term>>(family.terms());
  model.sample_lambda = [cumulative](SampleStream& s) {
    const double u = s.next_unit();
    std::size_t i = 0;
    while (i + 1 < cumulative.size() && u >= cumulative[i]) ++i;
    return HiddenVariable{i};
  };
  model.outcome_a = [terms](const Direction& d, const HiddenVariable& lambda) {
    return (*terms).at(lambda.index()).marginal_a(d);
  };
  model.outcome_b = [terms](const Direction& d, const HiddenVariable& lambda) {
    return (*terms).at(lambda.index()).marginal_b(d);
  };
  return model;
}

inline const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"sign-model", "trivial", "marginal-product"};
  return names;
}

/// Builds a zoo model by registry name.  "marginal-product" wraps the
/// four-atom singlet basis family.
inline HiddenVariableModel make_model(std::string_view name) {
  if (name == "sign-model") return make_sign_model();
  if (name == "trivial") return make_trivial_model();
  if (name == "marginal-product")
    return make_marginal_product_model(LambdaConditionedFamily::singlet_basis_terms());
  std::string available;
  for (const auto& n : model_names()) available += (available.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "'; available: " + available);
}

}  // namespace bell
