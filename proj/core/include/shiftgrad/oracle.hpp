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

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shiftgrad {

using Vector = std::vector<double>;
using Evaluator = std::function<double(std::span<const double>)>;
using DomainPredicate = std::function<bool(std::span<const double>)>;

/// Raised when a black-box function is queried outside its valid domain, or
/// when an evaluation produces a non-finite value. The offending input is
/// attached so callers can tell which shifted point escaped the domain.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, Vector point)
      : std::domain_error(what), point_(std::move(point)) {}

  const Vector& point() const noexcept { return point_; }

 private:
  Vector point_;
};

/// Raised for numerically degenerate parameters (zero shift, singular
/// coefficient, coincident shifts).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar field over R^d reachable only through evaluations.
///
/// Every successful call to eval() bumps the handle's query counter by exactly
/// one. The counter is atomic, so concurrent evaluation of a pure evaluator
/// leaves an exact final count. Copies get an independent counter that starts
/// from the source's current value.
class BlackBoxFunction {
 public:
  BlackBoxFunction(std::size_t dimension, Evaluator evaluator,
                   DomainPredicate domain = {});

  BlackBoxFunction(const BlackBoxFunction& other);
  BlackBoxFunction& operator=(const BlackBoxFunction& other);
  BlackBoxFunction(BlackBoxFunction&& other) noexcept;
  BlackBoxFunction& operator=(BlackBoxFunction&& other) noexcept;
  ~BlackBoxFunction() = default;

  std::size_t dimension() const noexcept { return dimension_; }

  /// Evaluates f(x). Throws std::invalid_argument on a size mismatch and
  /// DomainError when x is outside the domain or f(x) is not finite. Failed
  /// evaluations are not counted.
  double eval(std::span<const double> x);
  double operator()(std::span<const double> x) { return eval(x); }

  /// True when x satisfies the domain constraint (always true without one).
  bool in_domain(std::span<const double> x) const;
  bool has_domain_constraint() const noexcept { return static_cast<bool>(domain_); }

  std::uint64_t query_count() const noexcept {
    return queries_.load(std::memory_order_relaxed);
  }
  void reset_query_count() noexcept { queries_.store(0, std::memory_order_relaxed); }

 private:
  std::size_t dimension_;
  Evaluator evaluator_;
  DomainPredicate domain_;
  std::atomic<std::uint64_t> queries_{0};
};

BlackBoxFunction make_counted_function(std::size_t dimension, Evaluator evaluator,
                                       DomainPredicate domain = {});

/// Resets the counter in place and hands back the same handle.
BlackBoxFunction& reset_query_count(BlackBoxFunction& f) noexcept;

/// Views coordinate `index` of `f` as a univariate function with every other
/// coordinate pinned to `base`. Evaluations are charged to `f`, and the
/// returned handle counts its own queries as well. `f` must outlive the view.
BlackBoxFunction restrict_to_coordinate(BlackBoxFunction& f, Vector base,
                                        std::size_t index);

enum class Method {
  kCentral,
  kForward,
  kFivePoint,
  kShiftRule,
  kPsrTwoTerm,
  kPsrFourTerm,
};

std::string_view to_string(Method method) noexcept;

/// Accepts both the long tags ("shift-rule", "psr-two-term") and the short CLI
/// spellings ("shift", "psr2", "psr4").
Method parse_method(std::string_view name);

/// Exact number of oracle queries `method` spends on a d-dimensional gradient.
std::uint64_t query_cost(Method method, std::size_t dimension) noexcept;

struct GradientEstimate {
  Vector values;
  std::uint64_t queries_used = 0;
  Method method = Method::kShiftRule;
};

}  // namespace shiftgrad
