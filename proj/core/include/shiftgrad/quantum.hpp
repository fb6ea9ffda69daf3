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
// Minimal statevector engine for one and two qubits.
//
// Wire 0 is the most significant bit of the basis index, so for two qubits the
// basis order is |q0 q1> = |00>, |01>, |10>, |11> and Z (x) I acts on wire 0.
// Circuits apply their gates in list order to |0...0>; the expectation of an
// observable B is <0| U^dagger B U |0> with U the product of the gates.

#pragma once

#include <complex>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shiftgrad/estimators.hpp"
#include "shiftgrad/oracle.hpp"

namespace shiftgrad::quantum {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 2;

/// Dense square complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  Matrix(std::size_t dim, std::initializer_list<Complex> row_major);

  static Matrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * dim_ + col];
  }

  Matrix adjoint() const;
  Matrix operator*(const Matrix& rhs) const;
  std::vector<Complex> operator*(std::span<const Complex> v) const;

  /// Max-norm of (M M^dagger - I).
  double unitarity_defect() const;
  /// Max-norm of (M - M^dagger).
  double hermiticity_defect() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

Matrix kron(const Matrix& a, const Matrix& b);

namespace pauli {
Matrix I();
Matrix X();
Matrix Y();
Matrix Z();
Matrix H();
}  // namespace pauli

class Statevector {
 public:
  /// |0...0> on `qubits` wires; throws std::invalid_argument outside [1, 2].
  explicit Statevector(int qubits);
  /// Throws std::invalid_argument unless the length is 2 or 4 and the norm is
  /// 1 within 1e-12.
  explicit Statevector(std::vector<Complex> amplitudes);

  int qubits() const noexcept { return qubits_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  double norm() const;

  void apply(const Matrix& full_unitary);
  /// <psi| B |psi>, complex in general.
  Complex expectation(const Matrix& observable) const;

 private:
  int qubits_;
  std::vector<Complex> amps_;
};

enum class GateKind { kRX, kRY, kRZ, kExpW, kExpZ, kCRX, kCRY, kCRZ, kFixed };

std::string_view to_string(GateKind kind) noexcept;

struct Gate {
  GateKind kind = GateKind::kFixed;
  double angle = 0.0;
  /// Axis angle of ExpW.
  double delta = 0.0;
  int target = 0;
  /// Control wire of CR* gates, -1 otherwise.
  int control = -1;
  /// Explicit unitary for kFixed: 2x2 on `target`, or the full register when
  /// target == -1.
  Matrix unitary;
  /// Marks the single parameter slot of a circuit template.
  bool free = false;

  static Gate rx(double angle, int target = 0);
  static Gate ry(double angle, int target = 0);
  static Gate rz(double angle, int target = 0);
  /// exp(-i mu (X cos delta + Y sin delta)).
  static Gate exp_w(double angle, double delta, int target = 0);
  /// exp(-i mu Z).
  static Gate exp_z(double angle, int target = 0);
  static Gate crx(double angle, int control, int target);
  static Gate cry(double angle, int control, int target);
  static Gate crz(double angle, int control, int target);
  /// Throws std::invalid_argument unless `u` is unitary within 1e-12.
  static Gate fixed(Matrix u, int target = -1);

  Gate& as_free() & {
    free = true;
    return *this;
  }
  Gate as_free() && {
    free = true;
    return std::move(*this);
  }

  /// The 2x2 (or full, for whole-register fixed gates) local matrix.
  Matrix local_matrix() const;
  /// Local matrix lifted to a `qubits`-wire register.
  Matrix full_matrix(int qubits) const;

  /// Eigenvalues of the generator G in exp(-i mu G): {-1/2, 1/2} for RX/RY/RZ,
  /// {-1, 1} for ExpW/ExpZ, {-1/2, 0, 1/2} for CR*. Empty for fixed gates.
  std::vector<double> generator_eigenvalues() const;
};

struct Circuit {
  int qubits = 1;
  std::vector<Gate> gates;

  /// Throws std::invalid_argument on out-of-range wires or qubit counts.
  void validate() const;
  /// Index of the gate marked free; throws unless exactly one is marked.
  std::size_t free_gate_index() const;
  /// Copy with the free gate's angle set to mu.
  Circuit bind(double mu) const;
};

struct Observable {
  std::string name;
  Matrix matrix;

  /// Throws std::invalid_argument unless the matrix is Hermitian within 1e-12.
  static Observable from_matrix(std::string name, Matrix m);

  static Observable sigma_x();
  static Observable sigma_y();
  static Observable sigma_z();
  static Observable z_i();
  static Observable z_z();
  /// Looks up "X", "Y", "Z", "ZI", "ZZ".
  static Observable preset(std::string_view name);
};

/// Applies the circuit to `initial` and returns the final state.
Statevector run(const Circuit& circuit, Statevector initial);

/// <0| U^dagger B U |0>. Throws std::invalid_argument on size mismatch or a
/// non-Hermitian observable, and NumericError if the imaginary residue
/// exceeds 1e-10.
double expectation(const Circuit& circuit, const Observable& observable);
double expectation(const Statevector& initial, const Circuit& circuit,
                   const Observable& observable);

/// mu -> expectation of the template with its free gate bound to mu.
BlackBoxFunction expectation_as_blackbox(const Circuit& circuit_template,
                                         const Observable& observable);

using PsrParams = std::variant<TwoTermPsrParams, FourTermPsrParams>;

/// Two-term rule (omega = eigenvalue gap, eps = pi / (2 omega)) for
/// two-eigenvalue generators, controlled-rotation defaults for three.
PsrParams default_psr_params(const Gate& gate);

struct PsrSweepRow {
  double mu;
  double psr;
  double oracle;
  std::optional<double> analytic;
};

struct PsrExactnessReport {
  std::vector<PsrSweepRow> rows;
  /// Against central difference at eps = 1e-6.
  double max_error_vs_oracle = 0.0;
  std::optional<double> max_error_vs_analytic;
  std::uint64_t psr_queries = 0;
};

inline constexpr std::size_t kSweepPoints = 64;
inline constexpr double kOracleStep = 1e-6;

/// Sweeps mu over [0, 2 pi) in 64 steps.
PsrExactnessReport psr_exactness_report(
    const Circuit& circuit_template, const Observable& observable, const PsrParams& params,
    const std::function<double(double)>& analytic_derivative = {});

/// The circuit families selectable by name from the command line.
struct NamedTemplate {
  std::string name;
  Circuit circuit;
  Observable observable;
  /// d/dmu of the expectation when a closed form is known.
  std::function<double(double)> analytic_derivative;
};

std::span<const std::string_view> template_names() noexcept;
bool is_template(std::string_view name) noexcept;
/// rx-z, ry-rz-x, crx-zz, expw-x, expz-x.
NamedTemplate named_template(std::string_view name);

}  // namespace shiftgrad::quantum
