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

#include "shiftgrad/testbed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "shiftgrad/calibration.hpp"
#include "shiftgrad/estimators.hpp"

namespace shiftgrad {
namespace {

constexpr std::array<std::string_view, 8> kNames = {
    "sin", "log", "quadratic", "cubic", "sin-cos", "quad-cos", "perceptron", "sigmoid-perceptron",
};

TestFunction univariate(std::string name, double (*value)(double), double (*derivative)(double),
                        std::string domain_text = "all reals") {
  return TestFunction{
      std::move(name),
      BlackBoxFunction(1, [value](std::span<const double> x) { return value(x[0]); }),
      [derivative](std::span<const double> x) { return Vector{derivative(x[0])}; },
      std::move(domain_text),
  };
}

}  // namespace

std::span<const std::string_view> test_function_names() noexcept { return kNames; }

bool is_test_function(std::string_view name) noexcept {
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

TestFunction make_test_function(std::string_view name,
                                std::span<const double> perceptron_inputs) {
  if (name == "sin") {
    return univariate(
        "sin", [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); });
  }
  if (name == "log") {
    TestFunction tf{
        "log",
        BlackBoxFunction(
            1, [](std::span<const double> x) { return std::log(x[0]); },
            [](std::span<const double> x) { return x[0] > 0.0; }),
        [](std::span<const double> x) { return Vector{1.0 / x[0]}; },
        "x > 0",
    };
    tf.sample_low = 0.1;
    return tf;
  }
  if (name == "quadratic") {
    return univariate(
        "quadratic", [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
  }
  if (name == "cubic") {
    return univariate(
        "cubic", [](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; });
  }
  if (name == "sin-cos") {
    return univariate(
        "sin-cos", [](double x) { return std::sin(x) * std::cos(x); },
        [](double x) { return std::cos(2.0 * x); });
  }
  if (name == "quad-cos") {
    return univariate(
        "quad-cos", [](double x) { return x * x + std::cos(x + 2.0); },
        [](double x) { return 2.0 * x - std::sin(x + 2.0); });
  }
  if (name == "perceptron" || name == "sigmoid-perceptron") {
    Vector inputs = perceptron_inputs.empty()
                        ? Vector{2.0, -1.0}
                        : Vector(perceptron_inputs.begin(), perceptron_inputs.end());
    return make_perceptron(std::move(inputs),
                           name == "perceptron" ? Activation::kNone : Activation::kSigmoid);
  }
  throw std::invalid_argument("unknown test function '" + std::string(name) + "'");
}

double sigmoid(double t) noexcept { return 1.0 / (1.0 + std::exp(-t)); }

double Perceptron::pre_activation(std::span<const double> params) const {
  if (params.size() != parameter_count()) {
    throw std::invalid_argument("perceptron expects " + std::to_string(parameter_count()) +
                                " parameters");
  }
  double acc = params.back();
  for (std::size_t i = 0; i < x.size(); ++i) acc += params[i] * x[i];
  return acc;
}

double Perceptron::value(std::span<const double> params) const {
  const double t = pre_activation(params);
  return activation == Activation::kSigmoid ? sigmoid(t) : t;
}

Vector Perceptron::gradient(std::span<const double> params) const {
  double scale = 1.0;
  if (activation == Activation::kSigmoid) {
    const double s = sigmoid(pre_activation(params));
    scale = s * (1.0 - s);
  }
  Vector g(parameter_count());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = scale * x[i];
  g.back() = scale;
  return g;
}

TestFunction make_perceptron(Vector x, Activation activation) {
  if (x.empty()) {
    throw std::invalid_argument("perceptron needs at least one input");
  }
  const Perceptron p{std::move(x), activation};
  const std::size_t dim = p.parameter_count();
  return TestFunction{
      activation == Activation::kSigmoid ? "sigmoid-perceptron" : "perceptron",
      BlackBoxFunction(dim, [p](std::span<const double> params) { return p.value(params); }),
      [p](std::span<const double> params) { return p.gradient(params); },
      "all reals",
  };
}

double gradient_self_check(const TestFunction& tf, std::size_t samples, std::uint64_t seed) {
  BlackBoxFunction f = tf.f;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(tf.sample_low, tf.sample_high);
  double worst = 0.0;
  Vector x(f.dimension());
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& xi : x) xi = dist(rng);
    const Vector exact = tf.gradient(x);
    const GradientEstimate est = five_point_stencil(f, x, 1e-4);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      worst = std::max(worst, std::abs(exact[i] - est.values[i]));
    }
  }
  return worst;
}

SigmoidRProbe sigmoid_r_hypothesis_check(std::span<const double> x, double epsilon,
                                         std::span<const double> w, double b) {
  if (x.empty() || w.size() != x.size()) {
    throw std::invalid_argument("probe needs matching non-empty x and w");
  }
  const double x1 = x[0];
  if (!(x1 > 0.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("probe needs x_1 > 0 and eps > 0");
  }
  if (epsilon * x1 < 5.0) {
    throw std::invalid_argument("probe needs eps * x_1 >= 5 (got " +
                                std::to_string(epsilon * x1) + ")");
  }

  TestFunction tf = make_perceptron(Vector(x.begin(), x.end()), Activation::kSigmoid);
  Vector anchor(w.begin(), w.end());
  anchor.push_back(b);
  const double reference = tf.gradient(anchor)[0];
  BlackBoxFunction along_w1 = restrict_to_coordinate(tf.f, anchor, 0);

  // r axis: [-4 x_1, 4 x_1] in steps of x_1 / 1000, so -x_1 lies on the grid.
  const CalibrationGrid r_axis{4.0 * x1, epsilon, x1 / 1000.0, epsilon};
  const std::vector<double> rs = r_axis.r_values();
  const double eps_axis[] = {epsilon};
  const CalibrationResult cal = calibrate_over(along_w1, reference, anchor[0], rs, eps_axis);

  const double plus = anchor[0] + epsilon;
  const double minus = anchor[0] - epsilon;
  SigmoidRProbe out;
  out.calibrated_r = cal.r_star;
  out.claimed_r = -x1;
  out.discrepancy = std::abs(cal.r_star - out.claimed_r) / std::abs(out.claimed_r);
  out.calibration_error = cal.error;
  out.reference_gradient = reference;
  out.shifted_difference = along_w1.eval(std::span(&plus, 1)) - along_w1.eval(std::span(&minus, 1));
  return out;
}

}  // namespace shiftgrad
