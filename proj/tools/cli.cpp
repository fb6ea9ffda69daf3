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

#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "shiftgrad/calibration.hpp"
#include "shiftgrad/estimators.hpp"
#include "shiftgrad/experiment.hpp"
#include "shiftgrad/quantum.hpp"
#include "shiftgrad/testbed.hpp"

namespace shiftgrad::cli {
namespace {

// A black box by name, with its exact gradient when one is known.
struct NamedFunction {
  BlackBoxFunction f;
  GradientFn exact;
};

NamedFunction resolve_function(const std::string& name, const Vector& inputs) {
  if (is_test_function(name)) {
    TestFunction tf = make_test_function(name, inputs);
    return {std::move(tf.f), std::move(tf.gradient)};
  }
  if (quantum::is_template(name)) {
    quantum::NamedTemplate t = quantum::named_template(name);
    GradientFn exact;
    if (t.analytic_derivative) {
      exact = [d = t.analytic_derivative](std::span<const double> mu) { return Vector{d(mu[0])}; };
    }
    return {quantum::expectation_as_blackbox(t.circuit, t.observable), std::move(exact)};
  }
  throw std::invalid_argument("unknown function '" + name + "'");
}

std::string join(std::span<const double> v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) s += sep;
    s += format_number(v[i]);
  }
  return s;
}

struct EstimateArgs {
  std::string function;
  std::string method = "central";
  std::optional<double> r;
  double eps = 1e-3;
  double omega = 1.0;
  FourTermPsrParams four = FourTermPsrParams::controlled_rotation_defaults();
  Vector at;
  Vector inputs;
};

int do_estimate(const EstimateArgs& a, std::ostream& out) {
  NamedFunction nf = resolve_function(a.function, a.inputs);
  if (a.at.size() != nf.f.dimension()) {
    throw std::invalid_argument("--at needs " + std::to_string(nf.f.dimension()) +
                                " coordinate(s) for " + a.function);
  }
  EstimatorSpec spec;
  spec.method = parse_method(a.method);
  spec.epsilon = a.eps;
  spec.r = a.r;
  spec.omega = a.omega;
  spec.four_term = a.four;
  const GradientEstimate est = estimate_gradient(nf.f, a.at, spec);
  out << "method: " << to_string(est.method) << '\n';
  out << "gradient: " << join(est.values) << '\n';
  out << "queries: " << est.queries_used << '\n';
  if (nf.exact) {
    const Vector exact = nf.exact(a.at);
    out << "exact: " << join(exact) << '\n';
    out << "distance: " << format_number(distance_error(exact, est.values)) << '\n';
  }
  return kExitOk;
}

struct CalibrateArgs {
  std::string function;
  double anchor = 0.0;
  double R = 2.0;
  double E = 2.0;
  double dr = 0.05;
  double de = 0.05;
  std::optional<double> ref_grad;
  std::vector<std::size_t> counts;
  std::string out_path;
};

// The derivative calibration compares against: --ref-grad when given, else a
// five-point estimate at eps = 1e-4 (its O(eps^4) bias is reported).
double reference_gradient(const CalibrateArgs& a, BlackBoxFunction& f, std::ostream& out) {
  if (a.ref_grad) return *a.ref_grad;
  BlackBoxFunction probe = f;
  probe.reset_query_count();
  const double x[] = {a.anchor};
  const double ref = five_point_stencil(probe, x, 1e-4).values[0];
  out << "reference: five-point(eps=1e-4) = " << format_number(ref) << " (" << probe.query_count()
      << " extra queries)\n";
  return ref;
}

NamedFunction univariate(const std::string& name) {
  NamedFunction nf = resolve_function(name, {});
  if (nf.f.dimension() != 1) {
    throw std::invalid_argument("calibration needs a univariate function; '" + name +
                                "' has dimension " + std::to_string(nf.f.dimension()));
  }
  return nf;
}

int do_calibrate(const CalibrateArgs& a, std::ostream& out) {
  NamedFunction nf = univariate(a.function);
  const double ref = reference_gradient(a, nf.f, out);
  const CalibrationGrid grid{a.R, a.E, a.dr, a.de};
  nf.f.reset_query_count();
  const CalibrationResult res = grid_search_calibrate(nf.f, ref, a.anchor, grid);
  out << "r*: " << format_number(res.r_star) << '\n';
  out << "eps*: " << format_number(res.eps_star) << '\n';
  out << "error: " << format_number(res.error) << '\n';
  out << "queries: " << res.evaluations << '\n';
  out << "grid: n_R=" << grid.r_count() << " n_E=" << grid.eps_count() << '\n';
  if (!res.skipped_epsilons.empty()) {
    out << "skipped eps (domain): " << join(res.skipped_epsilons) << '\n';
  }
  return kExitOk;
}

int do_landscape(const CalibrateArgs& a, std::ostream& out) {
  NamedFunction nf = univariate(a.function);
  const double ref = reference_gradient(a, nf.f, out);
  const CalibrationLandscape land =
      calibration_landscape(nf.f, ref, a.anchor, a.counts, a.counts, a.R, a.E);
  std::ofstream file(a.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + a.out_path + " for writing");
  write_landscape_csv(file, land);
  file.flush();
  if (!file) throw std::runtime_error("failed writing " + a.out_path);
  write_landscape_csv(out, land);
  return kExitOk;
}

int do_experiment(const std::string& config_path, const std::string& out_override,
                  std::ostream& out) {
  ExperimentConfig config = load_experiment_config(config_path);
  if (!out_override.empty()) config.output_path = out_override;
  const ExperimentResult result = run_experiment(config);
  if (config.output_path) emit_report(result);
  const ExperimentSummary& s = result.summary;
  out << "function: " << config.function << '\n';
  out << "points: " << result.records.size() << " (flagged " << s.flagged << ")\n";
  out << "mean distance: " << format_number(s.mean_distance) << '\n';
  out << "max distance: " << format_number(s.max_distance) << '\n';
  out << "queries: " << s.total_queries << " (expected " << s.expected_queries << ")\n";
  if (config.distribution == Distribution::kNormal) {
    out << "sampling: normal(mean=0, sd=5)\n";
  } else {
    out << "sampling: uniform[0, 5)\n";
  }
  if (config.output_path) out << "wrote: " << config.output_path->string() << '\n';
  return kExitOk;
}

int do_quantum(const std::string& name, const std::string& method, std::optional<double> eps,
               std::ostream& out) {
  const quantum::NamedTemplate t = quantum::named_template(name);
  const quantum::Gate& gate = t.circuit.gates[t.circuit.free_gate_index()];
  quantum::PsrParams params = quantum::default_psr_params(gate);
  if (method == "psr2") {
    auto* two = std::get_if<TwoTermPsrParams>(&params);
    if (two == nullptr) {
      throw std::invalid_argument(std::string(quantum::to_string(gate.kind)) +
                                  " has a three-eigenvalue generator; use --method psr4");
    }
    if (eps) two->epsilon = *eps;
  } else if (method == "psr4") {
    if (eps) throw std::invalid_argument("--eps applies to psr2 only");
    params = FourTermPsrParams::controlled_rotation_defaults();
  } else {
    throw std::invalid_argument("--method must be psr2 or psr4");
  }

  const quantum::PsrExactnessReport rep =
      quantum::psr_exactness_report(t.circuit, t.observable, params, t.analytic_derivative);
  out << "template: " << t.name << " (free gate " << quantum::to_string(gate.kind)
      << ", observable " << t.observable.name << ")\n";
  if (const auto* two = std::get_if<TwoTermPsrParams>(&params)) {
    out << "psr2: omega=" << format_number(two->omega) << " eps=" << format_number(two->epsilon)
        << '\n';
  } else {
    const auto& four = std::get<FourTermPsrParams>(params);
    out << "psr4: d1=" << format_number(four.d1) << " d2=" << format_number(four.d2)
        << " eps1=" << format_number(four.epsilon1) << " eps2=" << format_number(four.epsilon2)
        << '\n';
  }
  out << "mu,psr,oracle,analytic\n";
  for (const auto& row : rep.rows) {
    out << format_number(row.mu) << ',' << format_number(row.psr) << ','
        << format_number(row.oracle) << ',' << (row.analytic ? format_number(*row.analytic) : "")
        << '\n';
  }
  out << "max |psr - oracle|: " << format_number(rep.max_error_vs_oracle) << '\n';
  if (rep.max_error_vs_analytic) {
    out << "max |psr - analytic|: " << format_number(*rep.max_error_vs_analytic) << '\n';
  }
  out << "psr queries: " << rep.psr_queries << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zeroth-order gradient estimation with generalized shift rules", "shiftgrad"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate a gradient at a point");
  estimate->add_option("--function", est.function, "Function or circuit template")->required();
  estimate->add_option("--method", est.method)
      ->check(CLI::IsMember({"central", "forward", "five-point", "shift", "psr2", "psr4"}));
  estimate->add_option("--r", est.r, "Shift-rule scale (default 1/(2 eps))");
  estimate->add_option("--eps", est.eps, "Shift / step size");
  estimate->add_option("--omega", est.omega, "Spectral gap for psr2");
  estimate->add_option("--d1", est.four.d1);
  estimate->add_option("--d2", est.four.d2);
  estimate->add_option("--eps1", est.four.epsilon1);
  estimate->add_option("--eps2", est.four.epsilon2);
  estimate->add_option("--at", est.at, "Point coordinates")->required()->allow_extra_args();
  estimate->add_option("--inputs", est.inputs, "Perceptron data point")->delimiter(',');

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Grid-search the (r, eps) pair");
  calibrate->add_option("--function", cal.function)->required();
  calibrate->add_option("--anchor", cal.anchor);
  calibrate->add_option("--R", cal.R);
  calibrate->add_option("--E", cal.E);
  calibrate->add_option("--dr", cal.dr);
  calibrate->add_option("--de", cal.de);
  calibrate->add_option("--ref-grad", cal.ref_grad, "Reference derivative at the anchor");

  CalibrateArgs land;
  auto* landscape = app.add_subcommand("landscape", "Minimum-error matrix over grid counts");
  landscape->add_option("--function", land.function)->required();
  landscape->add_option("--anchor", land.anchor);
  landscape->add_option("--R", land.R);
  landscape->add_option("--E", land.E);
  landscape->add_option("--counts", land.counts)->required()->delimiter(',');
  landscape->add_option("--ref-grad", land.ref_grad);
  landscape->add_option("--out", land.out_path)->required();

  std::string config_path;
  std::string out_override;
  auto* experiment = app.add_subcommand("experiment", "Run a JSON-configured experiment");
  experiment->add_option("--config", config_path)->required();
  experiment->add_option("--out", out_override, "Override the config's output path");

  std::string template_name;
  std::string psr_method = "psr2";
  std::optional<double> psr_eps;
  auto* quantum_cmd = app.add_subcommand("quantum", "PSR exactness sweep on a circuit template");
  quantum_cmd->add_option("--template", template_name)->required();
  quantum_cmd->add_option("--method", psr_method)->check(CLI::IsMember({"psr2", "psr4"}));
  quantum_cmd->add_option("--eps", psr_eps);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*estimate) return do_estimate(est, out);
    if (*calibrate) return do_calibrate(cal, out);
    if (*landscape) return do_landscape(land, out);
    if (*experiment) return do_experiment(config_path, out_override, out);
    if (*quantum_cmd) return do_quantum(template_name, psr_method, psr_eps, out);
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const SamplingError& e) {
    err << "sampling error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace shiftgrad::cli
