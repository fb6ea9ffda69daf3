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

#include "shiftgrad/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "shiftgrad/quantum.hpp"
#include "shiftgrad/testbed.hpp"

namespace shiftgrad {
namespace {

using nlohmann::json;

struct Problem {
  BlackBoxFunction f;
  GradientFn exact;
  std::string exact_source;
};

Problem make_problem(const ExperimentConfig& config) {
  if (is_test_function(config.function)) {
    TestFunction tf = make_test_function(config.function, config.perceptron_inputs);
    return Problem{std::move(tf.f), std::move(tf.gradient), "analytic"};
  }
  if (quantum::is_template(config.function)) {
    quantum::NamedTemplate t = quantum::named_template(config.function);
    BlackBoxFunction f = quantum::expectation_as_blackbox(t.circuit, t.observable);
    if (t.analytic_derivative) {
      auto d = t.analytic_derivative;
      return Problem{std::move(f), [d](std::span<const double> mu) { return Vector{d(mu[0])}; },
                     "analytic"};
    }
    BlackBoxFunction reference = f;
    auto oracle = [reference](std::span<const double> mu) mutable {
      return central_difference(reference, mu, quantum::kOracleStep).values;
    };
    return Problem{std::move(f), oracle, "central-difference(eps=1e-6)"};
  }
  throw std::invalid_argument("unknown function '" + config.function + "'");
}

// True when x and every shifted point the estimator will query are in domain.
bool shifted_points_in_domain(const BlackBoxFunction& f, std::span<const double> x,
                              std::span<const double> offsets) {
  if (!f.in_domain(x)) return false;
  Vector probe(x.begin(), x.end());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    for (double s : offsets) {
      probe[i] = x[i] + s;
      const bool ok = f.in_domain(probe);
      probe[i] = x[i];
      if (!ok) return false;
    }
  }
  return true;
}

void process_point(BlackBoxFunction& f, const GradientFn& exact, const EstimatorSpec& spec,
                   DistanceErrorRecord& record) {
  record.exact_gradient = exact(record.point);
  const std::uint64_t before = f.query_count();
  try {
    GradientEstimate est = estimate_gradient(f, record.point, spec);
    record.estimated_gradient = std::move(est.values);
    record.distance = distance_error(record.exact_gradient, record.estimated_gradient);
  } catch (const DomainError& e) {
    record.flagged = true;
    record.flag_reason = e.what();
    record.distance = std::numeric_limits<double>::quiet_NaN();
  }
  record.queries = f.query_count() - before;
}

std::string join(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) out += ';';
    out += format_number(v[i]);
  }
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw std::invalid_argument("unknown field '" + item.key() + "' in " + std::string(where));
    }
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

double distance_error(std::span<const double> exact, std::span<const double> estimate) {
  if (exact.size() != estimate.size()) {
    throw std::invalid_argument("distance_error needs vectors of equal length");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double d = exact[i] - estimate[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::string_view to_string(Distribution d) noexcept {
  return d == Distribution::kNormal ? "normal" : "uniform";
}

Distribution parse_distribution(std::string_view name) {
  if (name == "normal") return Distribution::kNormal;
  if (name == "uniform") return Distribution::kUniform;
  throw std::invalid_argument("unknown distribution '" + std::string(name) +
                              "' (expected normal or uniform)");
}

std::vector<Vector> sample_points(Distribution distribution, std::size_t count,
                                  std::uint64_t seed, std::size_t dimension,
                                  const DomainPredicate& domain) {
  if (count == 0) throw std::invalid_argument("sample count must be >= 1");
  if (dimension == 0) throw std::invalid_argument("sample dimension must be >= 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 5.0);
  std::uniform_real_distribution<double> uniform(0.0, 5.0);
  auto draw = [&] { return distribution == Distribution::kNormal ? normal(rng) : uniform(rng); };

  const std::uint64_t budget = 10'000ULL * count;
  std::uint64_t rejections = 0;
  std::vector<Vector> points;
  points.reserve(count);
  Vector x(dimension);
  while (points.size() < count) {
    for (double& xi : x) xi = draw();
    if (domain && !domain(x)) {
      if (++rejections > budget) {
        throw SamplingError("rejection sampling exhausted its budget of " +
                            std::to_string(budget) + " draws; the domain looks infeasible "
                            "under " + std::string(to_string(distribution)) + "(0, 5)");
      }
      continue;
    }
    points.push_back(x);
  }
  return points;
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  ExperimentConfig c;
  reject_unknown_keys(j,
                      {"function", "perceptron_inputs", "seed", "restrict_to_domain", "threads",
                       "estimator", "sampling", "output"},
                      "config");
  try {
    c.function = get_or<std::string>(j, "function", c.function);
    c.perceptron_inputs = get_or<Vector>(j, "perceptron_inputs", {});
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.restrict_to_domain = get_or<bool>(j, "restrict_to_domain", c.restrict_to_domain);
    c.threads = std::max<std::size_t>(1, get_or<std::size_t>(j, "threads", 1));

    if (j.contains("estimator")) {
      const json& e = j.at("estimator");
      reject_unknown_keys(e,
                          {"method", "epsilon", "r", "closed_form", "omega", "d1", "d2",
                           "epsilon1", "epsilon2"},
                          "estimator");
      EstimatorSpec& s = c.estimator;
      s.method = parse_method(get_or<std::string>(e, "method", "central"));
      s.epsilon = get_or<double>(e, "epsilon", s.epsilon);
      if (e.contains("r")) s.r = e.at("r").get<double>();
      if (e.contains("closed_form")) {
        c.closed_form = parse_closed_form_family(e.at("closed_form").get<std::string>());
      }
      s.omega = get_or<double>(e, "omega", s.omega);
      s.four_term.d1 = get_or<double>(e, "d1", s.four_term.d1);
      s.four_term.d2 = get_or<double>(e, "d2", s.four_term.d2);
      s.four_term.epsilon1 = get_or<double>(e, "epsilon1", s.four_term.epsilon1);
      s.four_term.epsilon2 = get_or<double>(e, "epsilon2", s.four_term.epsilon2);
      if (c.closed_form) {
        if (s.r) throw std::invalid_argument("estimator sets both r and closed_form");
        if (e.contains("method") && s.method != Method::kShiftRule) {
          throw std::invalid_argument("closed_form only applies to the shift method");
        }
        s.method = Method::kShiftRule;
      }
    }
    if (j.contains("sampling")) {
      const json& s = j.at("sampling");
      reject_unknown_keys(s, {"distribution", "count"}, "sampling");
      c.distribution = parse_distribution(get_or<std::string>(s, "distribution", "uniform"));
      c.count = get_or<std::size_t>(s, "count", c.count);
    }
    if (j.contains("output")) {
      const json& o = j.at("output");
      reject_unknown_keys(o, {"path", "format"}, "output");
      if (o.contains("path")) c.output_path = o.at("path").get<std::string>();
      const std::string format = get_or<std::string>(o, "format", "csv");
      if (format == "csv") {
        c.output_format = OutputFormat::kCsv;
      } else if (format == "json") {
        c.output_format = OutputFormat::kJson;
      } else {
        throw std::invalid_argument("unknown output format '" + format + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config field: ") + e.what());
  }
  if (c.count == 0) throw std::invalid_argument("sampling.count must be >= 1");
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  Problem problem = make_problem(config);
  ExperimentResult result;
  result.config = config;
  result.exact_gradient_source = problem.exact_source;

  EstimatorSpec spec = config.estimator;
  if (config.closed_form) {
    spec.method = Method::kShiftRule;
    spec.r = closed_form_rule(*config.closed_form).r(spec.epsilon);
  }
  if (spec.method == Method::kShiftRule) {
    result.shift_r = spec.r.value_or(1.0 / (2.0 * spec.epsilon));
  }

  DomainPredicate accept;
  if (config.restrict_to_domain && problem.f.has_domain_constraint()) {
    const std::vector<double> offsets = shift_offsets(spec);
    const BlackBoxFunction& f = problem.f;
    accept = [&f, offsets](std::span<const double> x) {
      return shifted_points_in_domain(f, x, offsets);
    };
  } else if (problem.f.has_domain_constraint()) {
    const BlackBoxFunction& f = problem.f;
    accept = [&f](std::span<const double> x) { return f.in_domain(x); };
  }
  const std::vector<Vector> points = sample_points(config.distribution, config.count, config.seed,
                                                   problem.f.dimension(), accept);

  result.records.resize(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) result.records[k].point = points[k];

  const std::size_t workers = std::min(config.threads, points.size());
  std::vector<BlackBoxFunction> handles(workers, problem.f);
  for (BlackBoxFunction& h : handles) h.reset_query_count();
  if (workers <= 1) {
    for (DistanceErrorRecord& r : result.records) process_point(handles[0], problem.exact, spec, r);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < result.records.size(); k += workers) {
          process_point(handles[w], problem.exact, spec, result.records[k]);
        }
      });
    }
  }

  ExperimentSummary& s = result.summary;
  double sum = 0.0;
  std::size_t ok = 0;
  for (const DistanceErrorRecord& r : result.records) {
    s.total_queries += r.queries;
    if (r.flagged) {
      ++s.flagged;
      continue;
    }
    ++ok;
    sum += r.distance;
    s.max_distance = std::max(s.max_distance, r.distance);
  }
  s.mean_distance = ok == 0 ? 0.0 : sum / static_cast<double>(ok);
  s.expected_queries = query_cost(spec.method, problem.f.dimension()) * ok;

  std::uint64_t counted = 0;
  for (const BlackBoxFunction& h : handles) counted += h.query_count();
  if (counted != s.total_queries) {
    throw std::logic_error("per-record query counts disagree with the oracle counters");
  }
  return result;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& os, const ExperimentResult& result) {
  os << "point,exact,estimate,distance,queries\n";
  for (const DistanceErrorRecord& r : result.records) {
    os << join(r.point) << ',' << join(r.exact_gradient) << ',' << join(r.estimated_gradient)
       << ',' << format_number(r.distance) << ',' << r.queries << '\n';
  }
}

void write_json(std::ostream& os, const ExperimentResult& result) {
  const ExperimentConfig& c = result.config;
  json records = json::array();
  for (const DistanceErrorRecord& r : result.records) {
    json rec{{"point", r.point},
             {"exact", r.exact_gradient},
             {"estimate", r.estimated_gradient},
             {"distance", number_or_null(r.distance)},
             {"queries", r.queries}};
    if (r.flagged) rec["flag"] = r.flag_reason;
    records.push_back(std::move(rec));
  }
  json metadata{
      {"function", c.function},
      {"method", std::string(to_string(c.closed_form ? Method::kShiftRule : c.estimator.method))},
      {"epsilon", c.estimator.epsilon},
      {"distribution", std::string(to_string(c.distribution))},
      {"distribution_parameters", c.distribution == Distribution::kNormal
                                      ? "mean=0, standard_deviation=5"
                                      : "low=0, high=5"},
      {"count", c.count},
      {"seed", c.seed},
      {"exact_gradient_source", result.exact_gradient_source},
  };
  if (result.shift_r) metadata["r"] = *result.shift_r;
  if (c.closed_form) metadata["closed_form"] = std::string(closed_form_rule(*c.closed_form).name);
  const ExperimentSummary& s = result.summary;
  json summary{{"mean_distance", s.mean_distance},
               {"max_distance", s.max_distance},
               {"total_queries", s.total_queries},
               {"expected_queries", s.expected_queries},
               {"flagged", s.flagged}};
  json doc{{"metadata", metadata}, {"summary", summary}, {"records", records}};
  os << doc.dump(2) << '\n';
}

void emit_report(const ExperimentResult& result, const std::filesystem::path& path,
                 OutputFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (format == OutputFormat::kCsv) {
    write_csv(out, result);
  } else {
    write_json(out, result);
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void emit_report(const ExperimentResult& result) {
  if (!result.config.output_path) {
    throw std::invalid_argument("experiment config has no output path");
  }
  emit_report(result, *result.config.output_path, result.config.output_format);
}

void write_landscape_csv(std::ostream& os, const CalibrationLandscape& landscape) {
  os << "nR\\nE";
  for (std::size_t nE : landscape.nE_values) os << ',' << nE;
  os << '\n';
  for (std::size_t i = 0; i < landscape.nR_values.size(); ++i) {
    os << landscape.nR_values[i];
    for (double e : landscape.min_error[i]) os << ',' << format_number(e);
    os << '\n';
  }
}

}  // namespace shiftgrad
