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

#include "shiftgrad/quantum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace shiftgrad::quantum {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kUnitaryTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kImagResidueTol = 1e-10;

constexpr std::array<std::string_view, 5> kTemplateNames = {
    "rx-z", "ry-rz-x", "crx-zz", "expw-x", "expz-x",
};

std::size_t register_dim(int qubits) { return std::size_t{1} << qubits; }

Matrix projector(int bit) {
  Matrix p(2);
  p(bit, bit) = 1.0;
  return p;
}

// Places `locals[w]` on wire w and takes the tensor product in wire order.
Matrix tensor_over_wires(const std::vector<Matrix>& locals) {
  Matrix out = locals.front();
  for (std::size_t w = 1; w < locals.size(); ++w) out = kron(out, locals[w]);
  return out;
}

Matrix rotation_for(GateKind kind, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  switch (kind) {
    case GateKind::kRX:
    case GateKind::kCRX:
      return Matrix(2, {c, -kI * s, -kI * s, c});
    case GateKind::kRY:
    case GateKind::kCRY:
      return Matrix(2, {c, -s, s, c});
    case GateKind::kRZ:
    case GateKind::kCRZ:
      return Matrix(2, {std::exp(-kI * (angle / 2.0)), 0.0, 0.0, std::exp(kI * (angle / 2.0))});
    default:
      throw std::invalid_argument("not a rotation gate");
  }
}

Gate make_gate(GateKind kind, double angle, int target, int control = -1, double delta = 0.0) {
  Gate g;
  g.kind = kind;
  g.angle = angle;
  g.delta = delta;
  g.target = target;
  g.control = control;
  return g;
}

bool is_controlled(GateKind kind) {
  return kind == GateKind::kCRX || kind == GateKind::kCRY || kind == GateKind::kCRZ;
}

}  // namespace

Matrix::Matrix(std::size_t dim, std::initializer_list<Complex> row_major)
    : dim_(dim), data_(row_major) {
  if (data_.size() != dim * dim) {
    throw std::invalid_argument("matrix initializer has the wrong number of entries");
  }
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (rhs.dim_ != dim_) throw std::invalid_argument("matrix size mismatch");
  Matrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const Complex a = (*this)(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < dim_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

std::vector<Complex> Matrix::operator*(std::span<const Complex> v) const {
  if (v.size() != dim_) throw std::invalid_argument("matrix-vector size mismatch");
  std::vector<Complex> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    Complex acc{};
    for (std::size_t j = 0; j < dim_; ++j) acc += (*this)(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

double Matrix::unitarity_defect() const {
  const Matrix p = (*this) * adjoint();
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      worst = std::max(worst, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double Matrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return worst;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.dim() * b.dim();
  Matrix out(n);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      for (std::size_t k = 0; k < b.dim(); ++k) {
        for (std::size_t l = 0; l < b.dim(); ++l) {
          out(i * b.dim() + k, j * b.dim() + l) = a(i, j) * b(k, l);
        }
      }
    }
  }
  return out;
}

namespace pauli {
Matrix I() { return Matrix::identity(2); }
Matrix X() { return Matrix(2, {0.0, 1.0, 1.0, 0.0}); }
Matrix Y() { return Matrix(2, {0.0, -kI, kI, 0.0}); }
Matrix Z() { return Matrix(2, {1.0, 0.0, 0.0, -1.0}); }
Matrix H() {
  const double h = 1.0 / std::numbers::sqrt2;
  return Matrix(2, {h, h, h, -h});
}
}  // namespace pauli

Statevector::Statevector(int qubits) : qubits_(qubits) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw std::invalid_argument("statevector supports 1 or 2 qubits");
  }
  amps_.assign(register_dim(qubits), Complex{});
  amps_[0] = 1.0;
}

Statevector::Statevector(std::vector<Complex> amplitudes) : qubits_(0), amps_(std::move(amplitudes)) {
  if (amps_.size() == 2) {
    qubits_ = 1;
  } else if (amps_.size() == 4) {
    qubits_ = 2;
  } else {
    throw std::invalid_argument("statevector needs 2 or 4 amplitudes");
  }
  if (std::abs(norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("statevector is not normalized");
  }
}

double Statevector::norm() const {
  double acc = 0.0;
  for (const Complex& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void Statevector::apply(const Matrix& full_unitary) {
  amps_ = full_unitary * std::span<const Complex>(amps_);
}

Complex Statevector::expectation(const Matrix& observable) const {
  const std::vector<Complex> b_psi = observable * std::span<const Complex>(amps_);
  Complex acc{};
  for (std::size_t i = 0; i < amps_.size(); ++i) acc += std::conj(amps_[i]) * b_psi[i];
  return acc;
}

std::string_view to_string(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::kRX: return "RX";
    case GateKind::kRY: return "RY";
    case GateKind::kRZ: return "RZ";
    case GateKind::kExpW: return "ExpW";
    case GateKind::kExpZ: return "ExpZ";
    case GateKind::kCRX: return "CRX";
    case GateKind::kCRY: return "CRY";
    case GateKind::kCRZ: return "CRZ";
    case GateKind::kFixed: return "fixed";
  }
  return "unknown";
}

Gate Gate::rx(double angle, int target) { return make_gate(GateKind::kRX, angle, target); }
Gate Gate::ry(double angle, int target) { return make_gate(GateKind::kRY, angle, target); }
Gate Gate::rz(double angle, int target) { return make_gate(GateKind::kRZ, angle, target); }
Gate Gate::exp_w(double angle, double delta, int target) {
  return make_gate(GateKind::kExpW, angle, target, -1, delta);
}
Gate Gate::exp_z(double angle, int target) { return make_gate(GateKind::kExpZ, angle, target); }
Gate Gate::crx(double angle, int control, int target) {
  return make_gate(GateKind::kCRX, angle, target, control);
}
Gate Gate::cry(double angle, int control, int target) {
  return make_gate(GateKind::kCRY, angle, target, control);
}
Gate Gate::crz(double angle, int control, int target) {
  return make_gate(GateKind::kCRZ, angle, target, control);
}

Gate Gate::fixed(Matrix u, int target) {
  if (u.dim() == 0 || u.unitarity_defect() > kUnitaryTol) {
    throw std::invalid_argument("fixed gate matrix is not unitary");
  }
  if (target >= 0 && u.dim() != 2) {
    throw std::invalid_argument("single-wire fixed gate needs a 2x2 matrix");
  }
  Gate g = make_gate(GateKind::kFixed, 0.0, target);
  g.unitary = std::move(u);
  return g;
}

Matrix Gate::local_matrix() const {
  switch (kind) {
    case GateKind::kRX:
    case GateKind::kRY:
    case GateKind::kRZ:
    case GateKind::kCRX:
    case GateKind::kCRY:
    case GateKind::kCRZ:
      return rotation_for(kind, angle);
    case GateKind::kExpZ:
      return Matrix(2, {std::exp(-kI * angle), 0.0, 0.0, std::exp(kI * angle)});
    case GateKind::kExpW: {
      // cos(mu) I - i sin(mu) (X cos delta + Y sin delta)
      const Complex c = std::cos(angle);
      const Complex s = -kI * std::sin(angle);
      return Matrix(2, {c, s * std::exp(-kI * delta), s * std::exp(kI * delta), c});
    }
    case GateKind::kFixed:
      return unitary;
  }
  throw std::invalid_argument("unhandled gate kind");
}

Matrix Gate::full_matrix(int qubits) const {
  const Matrix local = local_matrix();
  if (kind == GateKind::kFixed && target < 0) {
    if (local.dim() != register_dim(qubits)) {
      throw std::invalid_argument("register-wide fixed gate has the wrong size");
    }
    return local;
  }
  std::vector<Matrix> wires(static_cast<std::size_t>(qubits), pauli::I());
  if (!is_controlled(kind)) {
    wires[static_cast<std::size_t>(target)] = local;
    return tensor_over_wires(wires);
  }
  // |0><0|_c (x) I + |1><1|_c (x) U_t
  std::vector<Matrix> idle = wires;
  idle[static_cast<std::size_t>(control)] = projector(0);
  wires[static_cast<std::size_t>(control)] = projector(1);
  wires[static_cast<std::size_t>(target)] = local;
  const Matrix a = tensor_over_wires(idle);
  const Matrix b = tensor_over_wires(wires);
  Matrix out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = a(i, j) + b(i, j);
  }
  return out;
}

std::vector<double> Gate::generator_eigenvalues() const {
  switch (kind) {
    case GateKind::kRX:
    case GateKind::kRY:
    case GateKind::kRZ:
      return {-0.5, 0.5};
    case GateKind::kExpW:
    case GateKind::kExpZ:
      return {-1.0, 1.0};
    case GateKind::kCRX:
    case GateKind::kCRY:
    case GateKind::kCRZ:
      return {-0.5, 0.0, 0.5};
    case GateKind::kFixed:
      return {};
  }
  return {};
}

void Circuit::validate() const {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw std::invalid_argument("circuits support 1 or 2 qubits");
  }
  for (const Gate& g : gates) {
    if (g.kind == GateKind::kFixed && g.target < 0) {
      if (g.unitary.dim() != register_dim(qubits)) {
        throw std::invalid_argument("register-wide fixed gate has the wrong size");
      }
      continue;
    }
    if (g.target < 0 || g.target >= qubits) {
      throw std::invalid_argument("gate target wire out of range");
    }
    if (is_controlled(g.kind)) {
      if (g.control < 0 || g.control >= qubits || g.control == g.target) {
        throw std::invalid_argument("controlled gate needs a distinct in-range control wire");
      }
    }
  }
}

std::size_t Circuit::free_gate_index() const {
  std::size_t index = gates.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (gates[i].free) {
      index = i;
      ++count;
    }
  }
  if (count != 1) {
    throw std::invalid_argument("circuit template needs exactly one free gate, found " +
                                std::to_string(count));
  }
  if (gates[index].kind == GateKind::kFixed) {
    throw std::invalid_argument("a fixed unitary cannot be the free gate");
  }
  return index;
}

Circuit Circuit::bind(double mu) const {
  Circuit out = *this;
  out.gates[free_gate_index()].angle = mu;
  return out;
}

Observable Observable::from_matrix(std::string name, Matrix m) {
  if (m.dim() == 0 || m.hermiticity_defect() > kHermitianTol) {
    throw std::invalid_argument("observable '" + name + "' is not Hermitian");
  }
  return Observable{std::move(name), std::move(m)};
}

Observable Observable::sigma_x() { return {"X", pauli::X()}; }
Observable Observable::sigma_y() { return {"Y", pauli::Y()}; }
Observable Observable::sigma_z() { return {"Z", pauli::Z()}; }
Observable Observable::z_i() { return {"ZI", kron(pauli::Z(), pauli::I())}; }
Observable Observable::z_z() { return {"ZZ", kron(pauli::Z(), pauli::Z())}; }

Observable Observable::preset(std::string_view name) {
  if (name == "X") return sigma_x();
  if (name == "Y") return sigma_y();
  if (name == "Z") return sigma_z();
  if (name == "ZI") return z_i();
  if (name == "ZZ") return z_z();
  throw std::invalid_argument("unknown observable preset '" + std::string(name) + "'");
}

Statevector run(const Circuit& circuit, Statevector initial) {
  circuit.validate();
  if (initial.qubits() != circuit.qubits) {
    throw std::invalid_argument("initial state and circuit disagree on the qubit count");
  }
  for (const Gate& g : circuit.gates) initial.apply(g.full_matrix(circuit.qubits));
  return initial;
}

double expectation(const Statevector& initial, const Circuit& circuit,
                   const Observable& observable) {
  if (observable.matrix.dim() != register_dim(circuit.qubits)) {
    throw std::invalid_argument("observable size does not match the register");
  }
  if (observable.matrix.hermiticity_defect() > kHermitianTol) {
    throw std::invalid_argument("observable is not Hermitian");
  }
  const Statevector final_state = run(circuit, initial);
  const Complex value = final_state.expectation(observable.matrix);
  if (std::abs(value.imag()) > kImagResidueTol) {
    throw NumericError("expectation has a non-negligible imaginary part");
  }
  return value.real();
}

double expectation(const Circuit& circuit, const Observable& observable) {
  return expectation(Statevector(circuit.qubits), circuit, observable);
}

BlackBoxFunction expectation_as_blackbox(const Circuit& circuit_template,
                                         const Observable& observable) {
  circuit_template.validate();
  circuit_template.free_gate_index();
  if (observable.matrix.dim() != register_dim(circuit_template.qubits)) {
    throw std::invalid_argument("observable size does not match the register");
  }
  return BlackBoxFunction(1, [circuit_template, observable](std::span<const double> mu) {
    return expectation(circuit_template.bind(mu[0]), observable);
  });
}

PsrParams default_psr_params(const Gate& gate) {
  const std::vector<double> eig = gate.generator_eigenvalues();
  if (eig.size() == 2) {
    const double omega = eig[1] - eig[0];
    return TwoTermPsrParams{omega, std::numbers::pi / (2.0 * omega)};
  }
  if (eig.size() == 3) {
    return FourTermPsrParams::controlled_rotation_defaults();
  }
  throw std::invalid_argument("gate has no generator; it cannot carry the free parameter");
}

PsrExactnessReport psr_exactness_report(const Circuit& circuit_template,
                                        const Observable& observable, const PsrParams& params,
                                        const std::function<double(double)>& analytic_derivative) {
  BlackBoxFunction f = expectation_as_blackbox(circuit_template, observable);
  BlackBoxFunction oracle_f = f;

  PsrExactnessReport report;
  report.rows.reserve(kSweepPoints);
  if (analytic_derivative) report.max_error_vs_analytic = 0.0;

  for (std::size_t k = 0; k < kSweepPoints; ++k) {
    const double mu = 2.0 * std::numbers::pi * static_cast<double>(k) /
                      static_cast<double>(kSweepPoints);
    const double point[] = {mu};
    const GradientEstimate est = std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, TwoTermPsrParams>) {
            return psr_two_term(f, point, p);
          } else {
            return psr_four_term(f, point, p);
          }
        },
        params);
    report.psr_queries += est.queries_used;

    PsrSweepRow row{mu, est.values[0], central_difference(oracle_f, point, kOracleStep).values[0],
                    std::nullopt};
    report.max_error_vs_oracle = std::max(report.max_error_vs_oracle, std::abs(row.psr - row.oracle));
    if (analytic_derivative) {
      row.analytic = analytic_derivative(mu);
      report.max_error_vs_analytic =
          std::max(*report.max_error_vs_analytic, std::abs(row.psr - *row.analytic));
    }
    report.rows.push_back(row);
  }
  return report;
}

std::span<const std::string_view> template_names() noexcept { return kTemplateNames; }

bool is_template(std::string_view name) noexcept {
  return std::find(kTemplateNames.begin(), kTemplateNames.end(), name) != kTemplateNames.end();
}

NamedTemplate named_template(std::string_view name) {
  if (name == "rx-z") {
    // <Z> = cos mu
    return {"rx-z", Circuit{1, {Gate::rx(0.0).as_free()}}, Observable::sigma_z(),
            [](double mu) { return -std::sin(mu); }};
  }
  if (name == "ry-rz-x") {
    // <X> = sin(0.3) cos mu
    return {"ry-rz-x", Circuit{1, {Gate::ry(0.3), Gate::rz(0.0).as_free()}},
            Observable::sigma_x(), [](double mu) { return -std::sin(0.3) * std::sin(mu); }};
  }
  if (name == "expz-x") {
    // <X> = sin(1) cos(2 mu)
    return {"expz-x", Circuit{1, {Gate::ry(1.0), Gate::exp_z(0.0).as_free()}},
            Observable::sigma_x(),
            [](double mu) { return -2.0 * std::sin(1.0) * std::sin(2.0 * mu); }};
  }
  if (name == "expw-x") {
    return {"expw-x", Circuit{1, {Gate::ry(0.5), Gate::exp_w(0.0, 0.3).as_free()}},
            Observable::sigma_x(), {}};
  }
  if (name == "crx-zz") {
    // H on the control before and after CRX turns Z (x) Z into X (x) Z on the
    // controlled branch pair: <ZZ> = cos(0.4) cos(mu / 2).
    return {"crx-zz",
            Circuit{2,
                    {Gate::fixed(pauli::H(), 0), Gate::ry(0.4, 1), Gate::crx(0.0, 0, 1).as_free(),
                     Gate::fixed(pauli::H(), 0)}},
            Observable::z_z(), [](double mu) { return -0.5 * std::cos(0.4) * std::sin(mu / 2.0); }};
  }
  throw std::invalid_argument("unknown circuit template '" + std::string(name) + "'");
}

}  // namespace shiftgrad::quantum
