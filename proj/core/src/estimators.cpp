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

#include "shiftgrad/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace shiftgrad {
namespace {

constexpr double kSingularSine = 1e-12;

// f evaluated at x + offset * e_i.
double eval_shifted(BlackBoxFunction& f, Vector& scratch, std::size_t i, double offset) {
  const double saved = scratch[i];
  scratch[i] = saved + offset;
  double value = 0.0;
  try {
    value = f.eval(scratch);
  } catch (...) {
    scratch[i] = saved;
    throw;
  }
  scratch[i] = saved;
  return value;
}

void check_dimension(const BlackBoxFunction& f, std::span<const double> x) {
  if (x.size() != f.dimension()) {
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                ", function expects " + std::to_string(f.dimension()));
  }
}

void check_positive_step(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw NumericError("finite-difference step must be positive and finite");
  }
}

// Sum over terms of weight * [f(x + shift e_i) - f(x - shift e_i)].
struct SymmetricTerm {
  double weight;
  double shift;
};

GradientEstimate symmetric_rule(BlackBoxFunction& f, std::span<const double> x,
                                std::span<const SymmetricTerm> terms, Method method) {
  check_dimension(f, x);
  Vector scratch(x.begin(), x.end());
  GradientEstimate out{Vector(x.size(), 0.0), 0, method};
  for (std::size_t i = 0; i < x.size(); ++i) {
    double acc = 0.0;
    for (const SymmetricTerm& t : terms) {
      const double plus = eval_shifted(f, scratch, i, t.shift);
      const double minus = eval_shifted(f, scratch, i, -t.shift);
      acc += t.weight * (plus - minus);
    }
    out.values[i] = acc;
  }
  out.queries_used = 2 * terms.size() * x.size();
  return out;
}

}  // namespace

void ShiftRuleParams::validate() const {
  if (epsilon == 0.0 || !std::isfinite(epsilon)) {
    throw NumericError("shift-rule epsilon must be non-zero and finite");
  }
  if (!std::isfinite(r)) {
    throw NumericError("shift-rule r must be finite");
  }
}

double TwoTermPsrParams::coefficient() const {
  validate();
  return omega / (2.0 * std::sin(omega * epsilon));
}

void TwoTermPsrParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw NumericError("two-term PSR needs a positive spectral gap omega");
  }
  if (std::abs(std::sin(omega * epsilon)) < kSingularSine) {
    throw NumericError("two-term PSR coefficient is singular: sin(omega * epsilon) = 0");
  }
}

void FourTermPsrParams::validate() const {
  if (epsilon1 == 0.0 || epsilon2 == 0.0) {
    throw NumericError("four-term PSR shifts must be non-zero");
  }
  if (epsilon1 == epsilon2) {
    throw NumericError("four-term PSR shifts must be distinct");
  }
}

FourTermPsrParams FourTermPsrParams::controlled_rotation_defaults() noexcept {
  constexpr double kSqrt2 = std::numbers::sqrt2;
  return FourTermPsrParams{
      .d1 = (kSqrt2 + 1.0) / (4.0 * kSqrt2),
      .d2 = -(kSqrt2 - 1.0) / (4.0 * kSqrt2),
      .epsilon1 = std::numbers::pi / 2.0,
      .epsilon2 = 3.0 * std::numbers::pi / 2.0,
  };
}

GradientEstimate shift_rule_gradient(BlackBoxFunction& f, std::span<const double> x,
                                     const ShiftRuleParams& params) {
  params.validate();
  const SymmetricTerm term{params.r, params.epsilon};
  return symmetric_rule(f, x, std::span(&term, 1), Method::kShiftRule);
}

GradientEstimate shift_rule_gradient(BlackBoxFunction& f, std::span<const double> x,
                                     std::span<const ShiftRuleParams> params) {
  check_dimension(f, x);
  if (params.size() != x.size()) {
    throw std::invalid_argument("per-coordinate shift-rule list must have one entry per "
                                "dimension");
  }
  for (const auto& p : params) p.validate();

  Vector scratch(x.begin(), x.end());
  GradientEstimate out{Vector(x.size(), 0.0), 0, Method::kShiftRule};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double plus = eval_shifted(f, scratch, i, params[i].epsilon);
    const double minus = eval_shifted(f, scratch, i, -params[i].epsilon);
    out.values[i] = params[i].r * (plus - minus);
  }
  out.queries_used = 2 * x.size();
  return out;
}

GradientEstimate central_difference(BlackBoxFunction& f, std::span<const double> x,
                                    double epsilon) {
  check_positive_step(epsilon);
  const SymmetricTerm term{1.0 / (2.0 * epsilon), epsilon};
  return symmetric_rule(f, x, std::span(&term, 1), Method::kCentral);
}

GradientEstimate forward_difference(BlackBoxFunction& f, std::span<const double> x,
                                    double epsilon) {
  check_positive_step(epsilon);
  check_dimension(f, x);
  Vector scratch(x.begin(), x.end());
  const double base = f.eval(scratch);
  GradientEstimate out{Vector(x.size(), 0.0), 0, Method::kForward};
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.values[i] = (eval_shifted(f, scratch, i, epsilon) - base) / epsilon;
  }
  out.queries_used = x.size() + 1;
  return out;
}

GradientEstimate five_point_stencil(BlackBoxFunction& f, std::span<const double> x,
                                    double epsilon) {
  check_positive_step(epsilon);
  check_dimension(f, x);
  Vector scratch(x.begin(), x.end());
  GradientEstimate out{Vector(x.size(), 0.0), 0, Method::kFivePoint};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p2 = eval_shifted(f, scratch, i, 2.0 * epsilon);
    const double p1 = eval_shifted(f, scratch, i, epsilon);
    const double m1 = eval_shifted(f, scratch, i, -epsilon);
    const double m2 = eval_shifted(f, scratch, i, -2.0 * epsilon);
    out.values[i] = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * epsilon);
  }
  out.queries_used = 4 * x.size();
  return out;
}

GradientEstimate psr_two_term(BlackBoxFunction& f, std::span<const double> mu,
                              const TwoTermPsrParams& params) {
  const SymmetricTerm term{params.coefficient(), params.epsilon};
  return symmetric_rule(f, mu, std::span(&term, 1), Method::kPsrTwoTerm);
}

GradientEstimate psr_four_term(BlackBoxFunction& f, std::span<const double> mu,
                               const FourTermPsrParams& params) {
  params.validate();
  const SymmetricTerm terms[] = {{params.d1, params.epsilon1}, {params.d2, params.epsilon2}};
  return symmetric_rule(f, mu, terms, Method::kPsrFourTerm);
}

GradientEstimate estimate_gradient(BlackBoxFunction& f, std::span<const double> x,
                                   const EstimatorSpec& spec) {
  switch (spec.method) {
    case Method::kCentral:
      return central_difference(f, x, spec.epsilon);
    case Method::kForward:
      return forward_difference(f, x, spec.epsilon);
    case Method::kFivePoint:
      return five_point_stencil(f, x, spec.epsilon);
    case Method::kShiftRule:
      return shift_rule_gradient(
          f, x, ShiftRuleParams{spec.r.value_or(1.0 / (2.0 * spec.epsilon)), spec.epsilon});
    case Method::kPsrTwoTerm:
      return psr_two_term(f, x, TwoTermPsrParams{spec.omega, spec.epsilon});
    case Method::kPsrFourTerm:
      return psr_four_term(f, x, spec.four_term);
  }
  throw std::invalid_argument("unhandled gradient method");
}

std::vector<double> shift_offsets(const EstimatorSpec& spec) {
  const double e = spec.epsilon;
  switch (spec.method) {
    case Method::kForward:
      return {0.0, e};
    case Method::kFivePoint:
      return {2.0 * e, e, -e, -2.0 * e};
    case Method::kPsrFourTerm:
      return {spec.four_term.epsilon1, -spec.four_term.epsilon1, spec.four_term.epsilon2,
              -spec.four_term.epsilon2};
    case Method::kCentral:
    case Method::kShiftRule:
    case Method::kPsrTwoTerm:
      return {e, -e};
  }
  return {};
}

double max_shift(const EstimatorSpec& spec) {
  double m = 0.0;
  for (double s : shift_offsets(spec)) m = std::max(m, std::abs(s));
  return m;
}

}  // namespace shiftgrad
