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
// Seeded gradient-accuracy experiments: sample points, estimate the gradient at
// each, compare against the exact gradient with the Euclidean distance, and
// emit the records as CSV or JSON.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shiftgrad/calibration.hpp"
#include "shiftgrad/estimators.hpp"
#include "shiftgrad/oracle.hpp"

namespace shiftgrad {

/// Euclidean norm of exact - estimate. Throws std::invalid_argument on a
/// length mismatch.
double distance_error(std::span<const double> exact, std::span<const double> estimate);

/// kNormal is N(mean 0, standard deviation 5); kUniform is U[0, 5).
enum class Distribution { kNormal, kUniform };

std::string_view to_string(Distribution d) noexcept;
Distribution parse_distribution(std::string_view name);

/// Raised when rejection sampling cannot meet the domain within its budget.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// M points of the given dimension with i.i.d. coordinates, deterministic in
/// `seed`. With a domain predicate, rejected draws are resampled; more than
/// 10^4 * M rejections throws SamplingError.
std::vector<Vector> sample_points(Distribution distribution, std::size_t count,
                                  std::uint64_t seed, std::size_t dimension = 1,
                                  const DomainPredicate& domain = {});

enum class OutputFormat { kCsv, kJson };

struct ExperimentConfig {
  /// A test-function name or a circuit template name.
  std::string function = "sin";
  /// Data point for the perceptron functions.
  Vector perceptron_inputs;
  EstimatorSpec estimator;
  /// When set, the shift-rule r comes from this closed-form rule.
  std::optional<ClosedFormFamily> closed_form;
  Distribution distribution = Distribution::kUniform;
  std::size_t count = 100;
  std::uint64_t seed = 42;
  /// Reject sampled points whose shifted evaluations would leave the domain.
  bool restrict_to_domain = true;
  std::size_t threads = 1;
  std::optional<std::filesystem::path> output_path;
  OutputFormat output_format = OutputFormat::kCsv;
};

/// Parses the JSON config schema documented in the README. Throws
/// std::invalid_argument on malformed or unknown fields.
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct DistanceErrorRecord {
  Vector point;
  Vector exact_gradient;
  Vector estimated_gradient;
  double distance = 0.0;
  std::uint64_t queries = 0;
  /// Set when the estimator hit a domain error; the message says where.
  bool flagged = false;
  std::string flag_reason;
};

struct ExperimentSummary {
  double mean_distance = 0.0;
  double max_distance = 0.0;
  std::uint64_t total_queries = 0;
  /// query_cost(method, d) times the number of unflagged points.
  std::uint64_t expected_queries = 0;
  std::size_t flagged = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  /// r actually used by the shift rule (closed form or configured), if any.
  std::optional<double> shift_r;
  std::string exact_gradient_source;
  std::vector<DistanceErrorRecord> records;
  ExperimentSummary summary;
};

/// Runs the configured experiment. Points may be split across threads; each
/// worker uses its own copy of the oracle and records come back in sampled
/// order, so output is identical to the sequential run.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_csv(std::ostream& os, const ExperimentResult& result);
void write_json(std::ostream& os, const ExperimentResult& result);

/// Writes to config.output_path in config.output_format. Throws
/// std::runtime_error on I/O failure.
void emit_report(const ExperimentResult& result);
void emit_report(const ExperimentResult& result, const std::filesystem::path& path,
                 OutputFormat format);

/// Matrix CSV: header "nR\nE,<nE...>", then one row per nR.
void write_landscape_csv(std::ostream& os, const CalibrationLandscape& landscape);

/// %.17g rendering used by every emitted number.
std::string format_number(double value);

}  // namespace shiftgrad
