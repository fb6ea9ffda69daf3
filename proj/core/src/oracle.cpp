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

#include "shiftgrad/oracle.hpp"

#include <cmath>
#include <sstream>

namespace shiftgrad {
namespace {

std::string describe_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i != 0) os << ", ";
    os << x[i];
  }
  os << ']';
  return os.str();
}

}  // namespace

BlackBoxFunction::BlackBoxFunction(std::size_t dimension, Evaluator evaluator,
                                   DomainPredicate domain)
    : dimension_(dimension), evaluator_(std::move(evaluator)), domain_(std::move(domain)) {
  if (dimension_ == 0) {
    throw std::invalid_argument("black-box function needs dimension >= 1");
  }
  if (!evaluator_) {
    throw std::invalid_argument("black-box function needs an evaluator");
  }
}

BlackBoxFunction::BlackBoxFunction(const BlackBoxFunction& other)
    : dimension_(other.dimension_),
      evaluator_(other.evaluator_),
      domain_(other.domain_),
      queries_(other.query_count()) {}

BlackBoxFunction& BlackBoxFunction::operator=(const BlackBoxFunction& other) {
  if (this != &other) {
    dimension_ = other.dimension_;
    evaluator_ = other.evaluator_;
    domain_ = other.domain_;
    queries_.store(other.query_count(), std::memory_order_relaxed);
  }
  return *this;
}

BlackBoxFunction::BlackBoxFunction(BlackBoxFunction&& other) noexcept
    : dimension_(other.dimension_),
      evaluator_(std::move(other.evaluator_)),
      domain_(std::move(other.domain_)),
      queries_(other.query_count()) {}

BlackBoxFunction& BlackBoxFunction::operator=(BlackBoxFunction&& other) noexcept {
  if (this != &other) {
    dimension_ = other.dimension_;
    evaluator_ = std::move(other.evaluator_);
    domain_ = std::move(other.domain_);
    queries_.store(other.query_count(), std::memory_order_relaxed);
  }
  return *this;
}

bool BlackBoxFunction::in_domain(std::span<const double> x) const {
  return !domain_ || domain_(x);
}

double BlackBoxFunction::eval(std::span<const double> x) {
  if (x.size() != dimension_) {
    throw std::invalid_argument("expected a point of dimension " + std::to_string(dimension_) +
                                ", got " + std::to_string(x.size()));
  }
  if (!in_domain(x)) {
    throw DomainError("point " + describe_point(x) + " is outside the function domain",
                      Vector(x.begin(), x.end()));
  }
  const double value = evaluator_(x);
  if (!std::isfinite(value)) {
    throw DomainError("evaluation at " + describe_point(x) + " is not finite",
                      Vector(x.begin(), x.end()));
  }
  queries_.fetch_add(1, std::memory_order_relaxed);
  return value;
}

BlackBoxFunction make_counted_function(std::size_t dimension, Evaluator evaluator,
                                       DomainPredicate domain) {
  return BlackBoxFunction(dimension, std::move(evaluator), std::move(domain));
}

BlackBoxFunction& reset_query_count(BlackBoxFunction& f) noexcept {
  f.reset_query_count();
  return f;
}

BlackBoxFunction restrict_to_coordinate(BlackBoxFunction& f, Vector base, std::size_t index) {
  if (base.size() != f.dimension()) {
    throw std::invalid_argument("base point dimension does not match the function");
  }
  if (index >= f.dimension()) {
    throw std::out_of_range("coordinate index out of range");
  }
  auto embed = [base, index](std::span<const double> t) {
    Vector x = base;
    x[index] = t[0];
    return x;
  };
  return BlackBoxFunction(
      1, [&f, embed](std::span<const double> t) { return f.eval(embed(t)); },
      [&f, embed](std::span<const double> t) { return f.in_domain(embed(t)); });
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::kCentral:
      return "central";
    case Method::kForward:
      return "forward";
    case Method::kFivePoint:
      return "five-point";
    case Method::kShiftRule:
      return "shift-rule";
    case Method::kPsrTwoTerm:
      return "psr-two-term";
    case Method::kPsrFourTerm:
      return "psr-four-term";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "central") return Method::kCentral;
  if (name == "forward") return Method::kForward;
  if (name == "five-point") return Method::kFivePoint;
  if (name == "shift" || name == "shift-rule") return Method::kShiftRule;
  if (name == "psr2" || name == "psr-two-term") return Method::kPsrTwoTerm;
  if (name == "psr4" || name == "psr-four-term") return Method::kPsrFourTerm;
  throw std::invalid_argument("unknown gradient method '" + std::string(name) + "'");
}

std::uint64_t query_cost(Method method, std::size_t dimension) noexcept {
  const auto d = static_cast<std::uint64_t>(dimension);
  switch (method) {
    case Method::kForward:
      return d + 1;
    case Method::kFivePoint:
    case Method::kPsrFourTerm:
      return 4 * d;
    case Method::kCentral:
    case Method::kShiftRule:
    case Method::kPsrTwoTerm:
      return 2 * d;
  }
  return 0;
}

}  // namespace shiftgrad
