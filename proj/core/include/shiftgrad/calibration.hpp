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
// Calibration of the shift-rule pair (r, eps) for a univariate black box.
//
// The brute-force search scans the box [-R, R] x [-E, E] on a regular grid and
// keeps the pair minimizing |f'(anchor) - r [f(anchor + eps) - f(anchor - eps)]|.
// Only the eps axis costs oracle queries: the two shifted values are cached per
// column, so a search over (n_R + 1) x (n_E + 1) points spends at most
// 2 (n_E + 1) queries and the r axis is pure arithmetic.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "shiftgrad/oracle.hpp"

namespace shiftgrad {

/// Grid columns with |eps| below this are skipped (the shift rule is degenerate).
inline constexpr double kZeroShiftTolerance = 1e-12;

struct CalibrationGrid {
  double R = 1.0;
  double E = 1.0;
  double delta_r = 0.1;
  double delta_eps = 0.1;

  /// Grid with n_R = nR and n_E = nE intervals, i.e. delta = 2 * bound / n.
  static CalibrationGrid from_counts(double R, double E, std::size_t nR, std::size_t nE);

  /// floor(2R / delta_r), tolerant to the rounding of 2R / delta_r.
  std::size_t r_count() const;
  std::size_t eps_count() const;

  /// -R + n * delta_r for n in [0, r_count()].
  double r_at(std::size_t n) const noexcept { return -R + static_cast<double>(n) * delta_r; }
  double eps_at(std::size_t m) const noexcept {
    return -E + static_cast<double>(m) * delta_eps;
  }

  std::vector<double> r_values() const;
  std::vector<double> eps_values() const;

  /// Throws std::invalid_argument unless bounds and steps are positive and
  /// both axes have at least one interval.
  void validate() const;
};

struct CalibrationResult {
  double r_star = 0.0;
  double eps_star = 0.0;
  double error = 0.0;
  /// Oracle queries spent by the search.
  std::uint64_t evaluations = 0;
  /// (r, eps) pairs compared.
  std::uint64_t points_compared = 0;
  /// Columns dropped because anchor +/- eps left the domain.
  std::vector<double> skipped_epsilons;
};

/// Brute-force search over explicit axes. Scan order is r outer, eps inner,
/// both in the order given; ties keep the first point visited. Columns with
/// |eps| < kZeroShiftTolerance are skipped, as are columns whose shifted points
/// leave the domain of f (recorded in skipped_epsilons).
///
/// Throws std::invalid_argument when `f` is not univariate or no usable grid
/// point remains after the zero-shift skip, and DomainError when every column
/// leaves the domain.
CalibrationResult calibrate_over(BlackBoxFunction& f, double reference_gradient,
                                 double anchor, std::span<const double> r_values,
                                 std::span<const double> eps_values);

CalibrationResult grid_search_calibrate(BlackBoxFunction& f, double reference_gradient,
                                        double anchor, const CalibrationGrid& grid);

/// Minimum-error matrix over grid resolutions: entry (i, j) is the error of
/// grid_search_calibrate on CalibrationGrid::from_counts(R, E, nR[i], nE[j]).
struct CalibrationLandscape {
  std::vector<std::size_t> nR_values;
  std::vector<std::size_t> nE_values;
  std::vector<std::vector<double>> min_error;
};

CalibrationLandscape calibration_landscape(BlackBoxFunction& f, double reference_gradient,
                                           double anchor,
                                           std::span<const std::size_t> nR_values,
                                           std::span<const std::size_t> nE_values, double R,
                                           double E);

enum class ClosedFormFamily {
  kSin,        // sin x: r = 1 / (2 sin eps)
  kSinCos,     // sin x cos x: r = 1 / sin(2 eps)
  kQuadratic,  // x^2: r = 1 / (2 eps)
  kLog,        // ln x: r ~ 1 / (2 eps), error O(eps^2)
  kLinear,     // affine maps: r = 1 / (2 eps)
};

struct ClosedFormRule {
  ClosedFormFamily family;
  std::string_view name;
  bool exact;
  /// Order of the residual in eps for approximate rules, 0 for exact ones.
  int approximation_order;

  /// Throws NumericError for a singular eps and std::invalid_argument when the
  /// rule needs |eps| < x and that fails.
  double r(double epsilon, std::optional<double> x = std::nullopt) const;
};

ClosedFormFamily parse_closed_form_family(std::string_view name);
const ClosedFormRule& closed_form_rule(ClosedFormFamily family) noexcept;
std::span<const ClosedFormRule> closed_form_rules() noexcept;

double closed_form_r(std::string_view family, double epsilon,
                     std::optional<double> x = std::nullopt);

}  // namespace shiftgrad
