// Copyright 2026 The shiftgrad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Zeroth-order gradient estimators. Every estimator touches f only through
// BlackBoxFunction::eval and spends exactly query_cost(method, d) queries.

#pragma once

#include <optional>
#include <span>

#include "shiftgrad/oracle.hpp"

namespace shiftgrad {

/// Generalized shift rule r * [f(x + eps e_i) - f(x - eps e_i)].
struct ShiftRuleParams {
  double r = 0.0;
  double epsilon = 0.0;

  /// Throws NumericError when epsilon == 0.
  void validate() const;
};

/// Two-term parameter-shift rule. `omega` is the spectral gap of the gate
/// generator (difference of its two eigenvalues).
struct TwoTermPsrParams {
  double omega = 1.0;
  double epsilon = 0.0;

  /// omega / (2 sin(omega * epsilon)); throws NumericError when singular.
  double coefficient() const;
  void validate() const;
};

/// Four-term rule d1 [f(mu + e1) - f(mu - e1)] + d2 [f(mu + e2) - f(mu - e2)].
struct FourTermPsrParams {
  double d1 = 0.0;
  double d2 = 0.0;
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;

  void validate() const;

  /// Coefficients for controlled rotations CR{X,Y,Z}(mu), whose generator
  /// |1><1| (x) sigma/2 has eigenvalues {-1/2, 0, 1/2}: shifts pi/2 and 3pi/2,
  /// d1 = (sqrt2 + 1) / (4 sqrt2), d2 = -(sqrt2 - 1) / (4 sqrt2).
  static FourTermPsrParams controlled_rotation_defaults() noexcept;
};

GradientEstimate shift_rule_gradient(BlackBoxFunction& f, std::span<const double> x,
                                     const ShiftRuleParams& params);

/// Per-coordinate variant; `params.size()` must equal the dimension.
GradientEstimate shift_rule_gradient(BlackBoxFunction& f, std::span<const double> x,
                                     std::span<const ShiftRuleParams> params);

/// O(eps^2) central difference; shift_rule_gradient with r = 1 / (2 eps).
GradientEstimate central_difference(BlackBoxFunction& f, std::span<const double> x,
                                    double epsilon);

/// O(eps) forward difference. f(x) is evaluated once and shared, so the cost is
/// d + 1 queries.
GradientEstimate forward_difference(BlackBoxFunction& f, std::span<const double> x,
                                    double epsilon);

/// O(eps^4) stencil (-f(x+2h) + 8 f(x+h) - 8 f(x-h) + f(x-2h)) / (12 h).
GradientEstimate five_point_stencil(BlackBoxFunction& f, std::span<const double> x,
                                    double epsilon);

/// Exact for every coordinate restriction of the form a + b cos(omega mu + c).
GradientEstimate psr_two_term(BlackBoxFunction& f, std::span<const double> mu,
                              const TwoTermPsrParams& params);

GradientEstimate psr_four_term(BlackBoxFunction& f, std::span<const double> mu,
                               const FourTermPsrParams& params);

/// Method plus whatever parameters it needs; used by the experiment runner
/// and the CLI to dispatch without a switch at every call site.
struct EstimatorSpec {
  Method method = Method::kCentral;
  double epsilon = 1e-3;
  /// Shift-rule scale. When unset, shift-rule falls back to 1 / (2 eps).
  std::optional<double> r;
  double omega = 1.0;
  FourTermPsrParams four_term = FourTermPsrParams::controlled_rotation_defaults();
};

GradientEstimate estimate_gradient(BlackBoxFunction& f, std::span<const double> x,
                                   const EstimatorSpec& spec);

/// Largest |shift| the spec applies along any coordinate.
double max_shift(const EstimatorSpec& spec);

/// Every offset s for which the spec evaluates f(x + s e_i). Used to pre-check
/// sampled points against a domain.
std::vector<double> shift_offsets(const EstimatorSpec& spec);

}  // namespace shiftgrad
