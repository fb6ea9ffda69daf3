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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shiftgrad/oracle.hpp"

namespace shiftgrad {

using GradientFn = std::function<Vector(std::span<const double>)>;

/// Benchmark function with a known gradient.
struct TestFunction {
  std::string name;
  BlackBoxFunction f;
  GradientFn gradient;
  std::string valid_domain;
  /// Box used when sampling points for self-checks.
  double sample_low = -5.0;
  double sample_high = 5.0;
};

/// Names accepted by make_test_function: sin, log, quadratic, cubic, sin-cos,
/// quad-cos, perceptron, sigmoid-perceptron.
std::span<const std::string_view> test_function_names() noexcept;
bool is_test_function(std::string_view name) noexcept;

/// The perceptron names use `perceptron_inputs` as their data point (default
/// [2, -1]); the other names ignore it. Throws std::invalid_argument for an
/// unknown name.
TestFunction make_test_function(std::string_view name,
                                std::span<const double> perceptron_inputs = {});

enum class Activation { kNone, kSigmoid };

double sigmoid(double t) noexcept;

/// Single-layer perceptron viewed as a function of its parameters (w, b) for a
/// fixed data point x. Parameter vectors are laid out as [w_1 .. w_n, b].
struct Perceptron {
  Vector x;
  Activation activation = Activation::kNone;

  std::size_t parameter_count() const noexcept { return x.size() + 1; }
  double pre_activation(std::span<const double> params) const;
  double value(std::span<const double> params) const;
  Vector gradient(std::span<const double> params) const;
};

/// Throws std::invalid_argument for an empty x.
TestFunction make_perceptron(Vector x, Activation activation);

/// Largest |analytic - five-point(eps = 1e-4)| component over `samples`
/// uniform points in the function's sample box. Queries go to a copy of tf.f.
double gradient_self_check(const TestFunction& tf, std::size_t samples = 100,
                           std::uint64_t seed = 7);

struct SigmoidRProbe {
  double calibrated_r = 0.0;
  double claimed_r = 0.0;
  /// |calibrated_r - claimed_r| / |claimed_r|.
  double discrepancy = 0.0;
  double calibration_error = 0.0;
  double reference_gradient = 0.0;
  /// f(w1 + eps) - f(w1 - eps) at the anchor.
  double shifted_difference = 0.0;
};

/// Calibrates r for the w_1 coordinate of the sigmoid perceptron at (w, b) with
/// the shift fixed at `epsilon`, and sets it against the asymptotic claim
/// r ~ -x_1. Requires x_1 > 0, eps > 0 and eps * x_1 >= 5; throws
/// std::invalid_argument otherwise. Reports, never asserts agreement.
SigmoidRProbe sigmoid_r_hypothesis_check(std::span<const double> x, double epsilon,
                                         std::span<const double> w, double b);

}  // namespace shiftgrad
