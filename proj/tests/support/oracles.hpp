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
// Test-only reference implementations. None of these go through the library's
// estimators or calibration code; they exist to check it.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace shiftgrad::testing {

struct BruteForceArgmin {
  double r = 0.0;
  double eps = 0.0;
  double error = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

// Exhaustive (r, eps) scan with no caching: f is re-evaluated at every grid
// point. Same scan order and tie rule as the library (r outer, eps inner,
// strict improvement).
inline BruteForceArgmin brute_force_grid(const std::function<double(double)>& f, double reference,
                                         double anchor, double R, double E, std::size_t nR,
                                         std::size_t nE) {
  BruteForceArgmin best;
  bool found = false;
  const double dr = 2.0 * R / static_cast<double>(nR);
  const double de = 2.0 * E / static_cast<double>(nE);
  for (std::size_t n = 0; n <= nR; ++n) {
    const double r = -R + static_cast<double>(n) * dr;
    for (std::size_t m = 0; m <= nE; ++m) {
      const double eps = -E + static_cast<double>(m) * de;
      if (std::abs(eps) < 1e-12) continue;
      const double diff = f(anchor + eps) - f(anchor - eps);
      best.evaluations += 2;
      const double err = std::abs(reference - r * diff);
      if (!found || err < best.error) {
        found = true;
        best = {r, eps, err, best.evaluations};
      }
    }
  }
  return best;
}

// Two-point symmetric difference computed directly, for oracle use.
inline double symmetric_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo,
                                         double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace shiftgrad::testing
