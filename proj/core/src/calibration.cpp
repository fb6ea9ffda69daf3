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

#include "shiftgrad/calibration.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace shiftgrad {
namespace {

std::size_t interval_count(double bound, double step) {
  return static_cast<std::size_t>(std::floor(2.0 * bound / step + 1e-9));
}

struct Column {
  double eps;
  double difference;  // f(anchor + eps) - f(anchor - eps)
};

constexpr std::array<ClosedFormRule, 5> kRules = {{
    {ClosedFormFamily::kSin, "sin", true, 0},
    {ClosedFormFamily::kSinCos, "sin-cos", true, 0},
    {ClosedFormFamily::kQuadratic, "quadratic", true, 0},
    {ClosedFormFamily::kLog, "log", false, 2},
    {ClosedFormFamily::kLinear, "linear", true, 0},
}};

}  // namespace

CalibrationGrid CalibrationGrid::from_counts(double R, double E, std::size_t nR,
                                             std::size_t nE) {
  if (nR == 0 || nE == 0) {
    throw std::invalid_argument("grid counts must be >= 1");
  }
  CalibrationGrid grid{R, E, 2.0 * R / static_cast<double>(nR),
                       2.0 * E / static_cast<double>(nE)};
  grid.validate();
  return grid;
}

std::size_t CalibrationGrid::r_count() const { return interval_count(R, delta_r); }
std::size_t CalibrationGrid::eps_count() const { return interval_count(E, delta_eps); }

std::vector<double> CalibrationGrid::r_values() const {
  std::vector<double> out(r_count() + 1);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = r_at(n);
  return out;
}

std::vector<double> CalibrationGrid::eps_values() const {
  std::vector<double> out(eps_count() + 1);
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = eps_at(m);
  return out;
}

void CalibrationGrid::validate() const {
  if (!(R > 0.0) || !(E > 0.0) || !std::isfinite(R) || !std::isfinite(E)) {
    throw std::invalid_argument("calibration bounds R and E must be positive");
  }
  if (!(delta_r > 0.0) || !(delta_eps > 0.0)) {
    throw std::invalid_argument("calibration steps must be positive");
  }
  if (r_count() < 1 || eps_count() < 1) {
    throw std::invalid_argument("calibration grid needs n_R >= 1 and n_E >= 1");
  }
}

CalibrationResult calibrate_over(BlackBoxFunction& f, double reference_gradient,
                                 double anchor, std::span<const double> r_values,
                                 std::span<const double> eps_values) {
  if (f.dimension() != 1) {
    throw std::invalid_argument("calibration needs a univariate function; restrict "
                                "multivariate functions to one coordinate first");
  }
  if (r_values.empty()) {
    throw std::invalid_argument("calibration grid has no r values");
  }

  CalibrationResult result;
  const std::uint64_t queries_before = f.query_count();

  std::vector<Column> columns;
  columns.reserve(eps_values.size());
  std::size_t nonzero_columns = 0;
  for (double eps : eps_values) {
    if (std::abs(eps) < kZeroShiftTolerance) continue;
    ++nonzero_columns;
    const double plus_point = anchor + eps;
    const double minus_point = anchor - eps;
    if (!f.in_domain(std::span(&plus_point, 1)) || !f.in_domain(std::span(&minus_point, 1))) {
      result.skipped_epsilons.push_back(eps);
      continue;
    }
    try {
      const double plus = f.eval(std::span(&plus_point, 1));
      const double minus = f.eval(std::span(&minus_point, 1));
      columns.push_back({eps, plus - minus});
    } catch (const DomainError&) {
      result.skipped_epsilons.push_back(eps);
    }
  }
  if (nonzero_columns == 0) {
    throw std::invalid_argument("calibration grid is empty after skipping eps = 0");
  }
  if (columns.empty()) {
    throw DomainError("anchor +/- eps leaves the domain for every grid eps", Vector{anchor});
  }

  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (double r : r_values) {
    for (const Column& c : columns) {
      const double err = std::abs(reference_gradient - r * c.difference);
      ++result.points_compared;
      if (!found || err < best) {
        found = true;
        best = err;
        result.r_star = r;
        result.eps_star = c.eps;
      }
    }
  }
  result.error = best;
  result.evaluations = f.query_count() - queries_before;
  return result;
}

CalibrationResult grid_search_calibrate(BlackBoxFunction& f, double reference_gradient,
                                        double anchor, const CalibrationGrid& grid) {
  grid.validate();
  const std::vector<double> rs = grid.r_values();
  const std::vector<double> es = grid.eps_values();
  return calibrate_over(f, reference_gradient, anchor, rs, es);
}

CalibrationLandscape calibration_landscape(BlackBoxFunction& f, double reference_gradient,
                                           double anchor,
                                           std::span<const std::size_t> nR_values,
                                           std::span<const std::size_t> nE_values, double R,
                                           double E) {
  if (nR_values.empty() || nE_values.empty()) {
    throw std::invalid_argument("landscape needs non-empty count lists");
  }
  CalibrationLandscape out;
  out.nR_values.assign(nR_values.begin(), nR_values.end());
  out.nE_values.assign(nE_values.begin(), nE_values.end());
  out.min_error.assign(nR_values.size(), std::vector<double>(nE_values.size(), 0.0));
  for (std::size_t i = 0; i < nR_values.size(); ++i) {
    for (std::size_t j = 0; j < nE_values.size(); ++j) {
      const auto grid = CalibrationGrid::from_counts(R, E, nR_values[i], nE_values[j]);
      out.min_error[i][j] = grid_search_calibrate(f, reference_gradient, anchor, grid).error;
    }
  }
  return out;
}

double ClosedFormRule::r(double epsilon, std::optional<double> x) const {
  if (epsilon == 0.0 || !std::isfinite(epsilon)) {
    throw NumericError(std::string(name) + " rule needs a non-zero shift");
  }
  switch (family) {
    case ClosedFormFamily::kSin: {
      const double s = std::sin(epsilon);
      if (std::abs(s) < 1e-12) throw NumericError("sin rule is singular: sin(eps) = 0");
      return 1.0 / (2.0 * s);
    }
    case ClosedFormFamily::kSinCos: {
      const double s = std::sin(2.0 * epsilon);
      if (std::abs(s) < 1e-12) throw NumericError("sin-cos rule is singular: sin(2 eps) = 0");
      return 1.0 / s;
    }
    case ClosedFormFamily::kLog:
      if (x && !(std::abs(epsilon) < *x)) {
        throw std::invalid_argument("log rule needs |eps| < x");
      }
      return 1.0 / (2.0 * epsilon);
    case ClosedFormFamily::kQuadratic:
    case ClosedFormFamily::kLinear:
      return 1.0 / (2.0 * epsilon);
  }
  throw std::invalid_argument("unhandled closed-form family");
}

ClosedFormFamily parse_closed_form_family(std::string_view name) {
  for (const ClosedFormRule& rule : kRules) {
    if (rule.name == name) return rule.family;
  }
  throw std::invalid_argument("unknown closed-form family '" + std::string(name) + "'");
}

const ClosedFormRule& closed_form_rule(ClosedFormFamily family) noexcept {
  for (const ClosedFormRule& rule : kRules) {
    if (rule.family == family) return rule;
  }
  return kRules.front();
}

std::span<const ClosedFormRule> closed_form_rules() noexcept { return kRules; }

double closed_form_r(std::string_view family, double epsilon, std::optional<double> x) {
  return closed_form_rule(parse_closed_form_family(family)).r(epsilon, x);
}

}  // namespace shiftgrad
