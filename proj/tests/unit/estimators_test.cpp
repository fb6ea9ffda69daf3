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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace shiftgrad {
namespace {

using testing::random_vector;

BlackBoxFunction univariate(double (*fn)(double)) {
  return make_counted_function(1, [fn](std::span<const double> x) { return fn(x[0]); });
}

BlackBoxFunction sine() { return univariate([](double x) { return std::sin(x); }); }

BlackBoxFunction constant(std::size_t d, double c = 5.0) {
  return make_counted_function(d, [c](std::span<const double>) { return c; });
}

// f(w, b) = w . x + b for a fixed data point x.
BlackBoxFunction affine(const Vector& x) {
  return make_counted_function(x.size() + 1, [x](std::span<const double> p) {
    double acc = p.back();
    for (std::size_t i = 0; i < x.size(); ++i) acc += p[i] * x[i];
    return acc;
  });
}

TEST(ShiftRuleTest, ExactForSineWithMatchedScale) {
  BlackBoxFunction f = sine();
  const double x[] = {1.2};
  const auto est = shift_rule_gradient(f, x, ShiftRuleParams{1.0 / (2.0 * std::sin(0.7)), 0.7});
  // mpmath: cos(1.2) = 0.36235775447667357764
  EXPECT_NEAR(est.values[0], 0.36235775447667357764, 1e-15);
  EXPECT_EQ(est.queries_used, 2u);
  EXPECT_EQ(est.method, Method::kShiftRule);
}

TEST(ShiftRuleTest, ConstantGivesZero) {
  BlackBoxFunction f = constant(4);
  const Vector x = {1.0, -2.0, 3.0, 0.5};
  const auto est = shift_rule_gradient(f, x, ShiftRuleParams{0.37, 1.3});
  for (double v : est.values) EXPECT_EQ(v, 0.0);
}

TEST(ShiftRuleTest, LinearPerceptronWithHalfInverseEpsilon) {
  BlackBoxFunction f = affine({2.0, -1.0});
  const Vector wb = {0.3, -1.7, 0.25};
  for (double eps : {0.01, 0.1, 1.0, 10.0}) {
    const auto est = shift_rule_gradient(f, wb, ShiftRuleParams{1.0 / (2.0 * eps), eps});
    EXPECT_NEAR(est.values[0], 2.0, 1e-12);
    EXPECT_NEAR(est.values[1], -1.0, 1e-12);
    EXPECT_NEAR(est.values[2], 1.0, 1e-12);
  }
}

TEST(ShiftRuleTest, RejectsZeroShift) {
  BlackBoxFunction f = sine();
  const double x[] = {0.0};
  EXPECT_THROW(shift_rule_gradient(f, x, ShiftRuleParams{1.0, 0.0}), NumericError);
  EXPECT_EQ(f.query_count(), 0u);
}

TEST(ShiftRuleTest, DomainViolationAtShiftedPointPropagates) {
  BlackBoxFunction f = make_counted_function(
      1, [](std::span<const double> x) { return std::log(x[0]); },
      [](std::span<const double> x) { return x[0] > 0.0; });
  const double x[] = {0.5};
  try {
    shift_rule_gradient(f, x, ShiftRuleParams{1.0, 0.75});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_DOUBLE_EQ(e.point()[0], -0.25);
  }
}

TEST(ShiftRuleTest, PerCoordinateParams) {
  BlackBoxFunction f = make_counted_function(2, [](std::span<const double> x) {
    return x[0] * x[0] + std::sin(x[1]);
  });
  const Vector x = {1.5, 0.4};
  const ShiftRuleParams params[] = {{1.0 / (2.0 * 0.3), 0.3},
                                    {1.0 / (2.0 * std::sin(0.9)), 0.9}};
  const auto est = shift_rule_gradient(f, x, params);
  EXPECT_NEAR(est.values[0], 3.0, 1e-14);
  EXPECT_NEAR(est.values[1], std::cos(0.4), 1e-14);
  EXPECT_EQ(est.queries_used, 4u);
  EXPECT_THROW(shift_rule_gradient(f, x, std::span(params, 1)), std::invalid_argument);
}

TEST(ShiftRuleTest, SignSymmetryIsExact) {
  std::mt19937_64 rng(11);
  BlackBoxFunction f = make_counted_function(3, [](std::span<const double> x) {
    return std::exp(0.3 * x[0]) * std::cos(x[1]) + x[2] * x[2] * x[0];
  });
  std::uniform_real_distribution<double> pick(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = random_vector(rng, 3, -2.0, 2.0);
    const double r = pick(rng);
    double eps = pick(rng);
    if (eps == 0.0) eps = 0.5;
    const auto a = shift_rule_gradient(f, x, ShiftRuleParams{r, eps});
    const auto b = shift_rule_gradient(f, x, ShiftRuleParams{-r, -eps});
    EXPECT_EQ(a.values, b.values);
  }
}

TEST(ShiftRuleTest, AffineExactnessForRandomFunctions) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = random_vector(rng, 4, -5.0, 5.0);
    BlackBoxFunction f = affine(x);
    const Vector wb = random_vector(rng, 5, -5.0, 5.0);
    for (double eps : {-3.0, 0.01, 0.1, 1.0, 10.0}) {
      const auto est = shift_rule_gradient(f, wb, ShiftRuleParams{1.0 / (2.0 * eps), eps});
      for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(est.values[i], x[i], 1e-12);
      EXPECT_NEAR(est.values.back(), 1.0, 1e-12);
    }
  }
}

TEST(CentralDifferenceTest, ExactForQuadratic) {
  BlackBoxFunction f = univariate([](double x) { return x * x; });
  const double x[] = {3.0};
  EXPECT_NEAR(central_difference(f, x, 0.1).values[0], 6.0, 1e-13);
}

TEST(CentralDifferenceTest, SineAtZero) {
  BlackBoxFunction f = sine();
  const double x[] = {0.0};
  // mpmath: sin(0.5) - sin(-0.5) = 0.95885107720840600054
  EXPECT_NEAR(central_difference(f, x, 0.5).values[0], 0.95885107720840600054, 1e-15);
}

TEST(CentralDifferenceTest, LogAtOne) {
  BlackBoxFunction f = univariate([](double x) { return std::log(x); });
  const double x[] = {1.0};
  // mpmath: ln 1.5 - ln 0.5 = ln 3 = 1.0986122886681096914
  EXPECT_NEAR(central_difference(f, x, 0.5).values[0], 1.0986122886681096914, 1e-15);
}

TEST(CentralDifferenceTest, RejectsNonPositiveStep) {
  BlackBoxFunction f = sine();
  const double x[] = {0.0};
  EXPECT_THROW(central_difference(f, x, 0.0), NumericError);
  EXPECT_THROW(central_difference(f, x, -0.1), NumericError);
}

TEST(ForwardDifferenceTest, QuadraticHasFirstOrderBias) {
  BlackBoxFunction f = univariate([](double x) { return x * x; });
  const double x[] = {3.0};
  const auto est = forward_difference(f, x, 0.1);
  EXPECT_NEAR(est.values[0], 6.1, 1e-12);
  EXPECT_EQ(est.queries_used, 2u);
}

TEST(ForwardDifferenceTest, ConstantAndLinear) {
  BlackBoxFunction c = constant(3);
  const Vector x = {0.1, 0.2, 0.3};
  for (double v : forward_difference(c, x, 0.01).values) EXPECT_EQ(v, 0.0);

  BlackBoxFunction f = affine({4.0, -3.0});
  const Vector wb = {1.0, 2.0, 3.0};
  for (double eps : {1e-3, 0.5, 7.0}) {
    const auto est = forward_difference(f, wb, eps);
    EXPECT_NEAR(est.values[0], 4.0, 1e-10);
    EXPECT_NEAR(est.values[1], -3.0, 1e-10);
    EXPECT_NEAR(est.values[2], 1.0, 1e-10);
    EXPECT_EQ(est.queries_used, 4u);
  }
}

TEST(FivePointStencilTest, ExactForCubic) {
  BlackBoxFunction f = univariate([](double x) { return x * x * x; });
  const double x[] = {2.0};
  EXPECT_NEAR(five_point_stencil(f, x, 0.1).values[0], 12.0, 1e-12);
}

TEST(FivePointStencilTest, SineAtZeroWithinFourthOrderBound) {
  BlackBoxFunction f = sine();
  const double x[] = {0.0};
  const double v = five_point_stencil(f, x, 0.5).values[0];
  // mpmath reference for the stencil itself: 0.99797777467524249851
  EXPECT_NEAR(v, 0.99797777467524249851, 1e-15);
  // truncation bound h^4 / 30 * max|f^(5)| = 0.0625 / 30
  EXPECT_LE(std::abs(v - 1.0), 0.0625 / 30.0);
}

TEST(FivePointStencilTest, ConstantGivesZero) {
  BlackBoxFunction f = constant(2);
  const Vector x = {1.0, 1.0};
  const auto est = five_point_stencil(f, x, 0.25);
  for (double v : est.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(est.queries_used, 8u);
}

// Ratio |err(0.1)| / |err(0.05)| at sin, x = 0.7. mpmath: 2.0376, 3.9985, 15.986.
TEST(ErrorOrderTest, HalvingStepScalesErrorByTheMethodOrder) {
  const double x[] = {0.7};
  const double truth = std::cos(0.7);
  auto ratio = [&](auto estimator) {
    BlackBoxFunction f = sine();
    const double coarse = std::abs(estimator(f, x, 0.1).values[0] - truth);
    const double fine = std::abs(estimator(f, x, 0.05).values[0] - truth);
    return coarse / fine;
  };
  const double fwd = ratio([](auto& f, std::span<const double> x, double e) { return forward_difference(f, x, e); });
  const double cen = ratio([](auto& f, std::span<const double> x, double e) { return central_difference(f, x, e); });
  const double fp = ratio([](auto& f, std::span<const double> x, double e) { return five_point_stencil(f, x, e); });
  EXPECT_GE(fwd, 1.8);
  EXPECT_LE(fwd, 2.2);
  EXPECT_GE(cen, 3.6);
  EXPECT_LE(cen, 4.4);
  EXPECT_GE(fp, 14.0);
  EXPECT_LE(fp, 18.0);
  EXPECT_NEAR(fwd, 2.0376, 1e-3);
  EXPECT_NEAR(cen, 3.9985, 1e-3);
  EXPECT_NEAR(fp, 15.986, 1e-2);
}

TEST(PsrTwoTermTest, PauliHalfGeneratorAtQuarterTurn) {
  BlackBoxFunction f = univariate([](double x) { return std::cos(x); });
  const TwoTermPsrParams params{1.0, std::numbers::pi / 2.0};
  EXPECT_NEAR(params.coefficient(), 0.5, 1e-16);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mu(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double x[] = {mu(rng)};
    EXPECT_NEAR(psr_two_term(f, x, params).values[0], -std::sin(x[0]), 1e-14);
  }
}

TEST(PsrTwoTermTest, ExactForArbitraryShift) {
  BlackBoxFunction f = univariate([](double x) { return std::cos(x); });
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> mu(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 100; ++i) {
    const double x[] = {mu(rng)};
    EXPECT_NEAR(psr_two_term(f, x, TwoTermPsrParams{1.0, 0.3}).values[0], -std::sin(x[0]),
                1e-13);
  }
}

TEST(PsrTwoTermTest, ExactOnRandomSinusoids) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> shift(0.05, 3.0);
  std::uniform_real_distribution<double> mu(-5.0, 5.0);
  for (double omega : {0.5, 1.0, 2.0}) {
    for (int i = 0; i < 100; ++i) {
      const double a = coef(rng), b = coef(rng), c = coef(rng);
      double eps = shift(rng);
      if (std::abs(std::sin(omega * eps)) < 1e-3) eps += 0.1;
      BlackBoxFunction f = make_counted_function(1, [=](std::span<const double> x) {
        return a + b * std::cos(omega * x[0]) + c * std::sin(omega * x[0]);
      });
      const double x[] = {mu(rng)};
      const double exact = omega * (-b * std::sin(omega * x[0]) + c * std::cos(omega * x[0]));
      const auto est = psr_two_term(f, x, TwoTermPsrParams{omega, eps});
      EXPECT_LT(std::abs(est.values[0] - exact), 1e-12)
          << "omega=" << omega << " eps=" << eps << " mu=" << x[0];
    }
  }
}

TEST(PsrTwoTermTest, SingularCoefficientThrows) {
  BlackBoxFunction f = constant(1);
  const double x[] = {0.0};
  EXPECT_THROW(psr_two_term(f, x, TwoTermPsrParams{1.0, std::numbers::pi}), NumericError);
  EXPECT_THROW(psr_two_term(f, x, TwoTermPsrParams{1.0, 0.0}), NumericError);
  EXPECT_THROW(psr_two_term(f, x, TwoTermPsrParams{-1.0, 0.5}), NumericError);
  const auto est = psr_two_term(f, x, TwoTermPsrParams{1.0, 0.5});
  EXPECT_EQ(est.values[0], 0.0);
}

TEST(PsrFourTermTest, DegenerateShiftsThrow) {
  BlackBoxFunction f = constant(1);
  const double x[] = {0.0};
  EXPECT_THROW(psr_four_term(f, x, FourTermPsrParams{1.0, 1.0, 0.5, 0.5}), NumericError);
  EXPECT_THROW(psr_four_term(f, x, FourTermPsrParams{1.0, 1.0, 0.0, 0.5}), NumericError);
}

TEST(PsrFourTermTest, ConstantGivesZeroForAnyCoefficients) {
  BlackBoxFunction f = constant(2);
  const Vector x = {0.3, 0.4};
  const auto est = psr_four_term(f, x, FourTermPsrParams{3.0, -7.0, 0.2, 1.1});
  for (double v : est.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(est.queries_used, 8u);
}

TEST(PsrFourTermTest, ReducesToShiftRuleWhenSecondTermVanishes) {
  std::mt19937_64 rng(23);
  BlackBoxFunction f = make_counted_function(2, [](std::span<const double> x) {
    return std::tanh(x[0]) * std::cos(3.0 * x[1]) + x[0];
  });
  std::uniform_real_distribution<double> pick(0.05, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Vector x = random_vector(rng, 2, -2.0, 2.0);
    const double r = pick(rng), eps = pick(rng);
    const auto four = psr_four_term(f, x, FourTermPsrParams{r, 0.0, eps, eps + 1.0});
    const auto two = shift_rule_gradient(f, x, ShiftRuleParams{r, eps});
    EXPECT_EQ(four.values, two.values);
  }
}

// Generator |1><1| (x) sigma/2 gives f(mu) = a + sum over frequencies {1/2, 1}.
TEST(PsrFourTermTest, DefaultsAreExactForControlledRotationSpectrum) {
  const FourTermPsrParams p = FourTermPsrParams::controlled_rotation_defaults();
  // mpmath: 0.42677669529663688110, -0.073223304703363118900
  EXPECT_NEAR(p.d1, 0.42677669529663688110, 1e-16);
  EXPECT_NEAR(p.d2, -0.073223304703363118900, 1e-16);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double a = coef(rng), b1 = coef(rng), c1 = coef(rng), b2 = coef(rng), c2 = coef(rng);
    auto g = [=](double m) {
      return a + b1 * std::cos(m / 2) + c1 * std::sin(m / 2) + b2 * std::cos(m) +
             c2 * std::sin(m);
    };
    BlackBoxFunction f = make_counted_function(1, [g](std::span<const double> x) { return g(x[0]); });
    const double x[] = {coef(rng) * 6.0};
    const double exact = 0.5 * (-b1 * std::sin(x[0] / 2) + c1 * std::cos(x[0] / 2)) -
                         b2 * std::sin(x[0]) + c2 * std::cos(x[0]);
    EXPECT_NEAR(psr_four_term(f, x, p).values[0], exact, 1e-13);
    // independent oracle: symmetric difference at a tiny step
    EXPECT_NEAR(psr_four_term(f, x, p).values[0], testing::symmetric_difference(g, x[0], 1e-5),
                1e-6);
  }
}

TEST(QueryAccountingTest, FreshHandleCountsMatchTheFormula) {
  const std::size_t d = 3;
  const Vector x = {0.1, 0.2, 0.3};
  auto fresh = [] {
    return make_counted_function(3, [](std::span<const double> p) {
      return std::sin(p[0]) + p[1] * p[2];
    });
  };
  for (Method m : {Method::kCentral, Method::kForward, Method::kFivePoint, Method::kShiftRule,
                   Method::kPsrTwoTerm, Method::kPsrFourTerm}) {
    BlackBoxFunction f = fresh();
    EstimatorSpec spec;
    spec.method = m;
    spec.epsilon = 0.25;
    const auto est = estimate_gradient(f, x, spec);
    EXPECT_EQ(f.query_count(), query_cost(m, d)) << to_string(m);
    EXPECT_EQ(est.queries_used, query_cost(m, d)) << to_string(m);
    EXPECT_EQ(est.method, m);
  }
}

TEST(EstimatorSpecTest, OffsetsCoverEveryQueriedPoint) {
  EstimatorSpec spec;
  spec.method = Method::kFivePoint;
  spec.epsilon = 0.5;
  EXPECT_EQ(max_shift(spec), 1.0);
  spec.method = Method::kPsrFourTerm;
  EXPECT_NEAR(max_shift(spec), 1.5 * std::numbers::pi, 1e-15);
  spec.method = Method::kForward;
  EXPECT_EQ(shift_offsets(spec), (std::vector<double>{0.0, 0.5}));
}

}  // namespace
}  // namespace shiftgrad
