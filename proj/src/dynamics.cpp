// Copyright 2026 The stagate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sta/dynamics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "sta/errors.hpp"

namespace sta {

namespace {

MatX kron(const MatX& a, const MatX& b) {
  MatX out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

MatX hamiltonian(const FieldVector& b, LevelModel model, double delta2) {
  if (model == LevelModel::TwoLevel) return qubit_hamiltonian(b);
  return transmon_hamiltonian(b, delta2);
}

Mat2 step_exponential_2(const FieldVector& b, double dt) {
  const double n = b.norm();
  if (n == 0.0) return Mat2::Identity();
  const double half = 0.5 * n * dt;
  const Mat2 g = (b.bx * pauli::x() + b.by * pauli::y() + b.bz * pauli::z()) / n;
  return std::cos(half) * Mat2::Identity() - kI * std::sin(half) * g;
}

Mat3 step_exponential_3(const Mat3& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Mat3> eig(h);
  const Eigen::Vector3d& lambda = eig.eigenvalues();
  Eigen::Vector3cd phases;
  for (int k = 0; k < 3; ++k) phases(k) = std::exp(-kI * (lambda(k) * dt));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

MatX step_exponential(const FieldVector& b, LevelModel model, double delta2, double dt) {
  if (model == LevelModel::TwoLevel) return step_exponential_2(b, dt);
  return step_exponential_3(transmon_hamiltonian(b, delta2), dt);
}

std::vector<MatX> collapse_operators(LevelModel model, const DecoherenceParams& dec) {
  std::vector<MatX> ops;
  const int d = dimension(model);
  if (dec.t1_ns) {
    MatX lower = MatX::Zero(d, d);
    lower(0, 1) = std::sqrt(1.0 / *dec.t1_ns);
    if (model == LevelModel::ThreeLevel) lower(1, 2) = std::sqrt(2.0 / *dec.t1_ns);
    ops.push_back(lower);
  }
  if (dec.tphi_ns) {
    MatX dephase = MatX::Zero(d, d);
    Eigen::VectorXd diag(d);
    if (model == LevelModel::TwoLevel) {
      diag << 1.0, -1.0;
    } else {
      diag << 1.0, -1.0, -3.0;
    }
    dephase.diagonal() = diag.cast<Complex>() * std::sqrt(1.0 / (2.0 * *dec.tphi_ns));
    ops.push_back(dephase);
  }
  return ops;
}

// Right-hand side of the master equation for a fixed Hamiltonian.
MatX lindblad_rhs(const MatX& h, const std::vector<MatX>& ops, const MatX& rho) {
  MatX out = -kI * (h * rho - rho * h);
  for (const MatX& l : ops) {
    const MatX ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

MatX liouvillian(const MatX& h, const std::vector<MatX>& ops) {
  const Eigen::Index d = h.rows();
  const MatX id = MatX::Identity(d, d);
  MatX out = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const MatX& l : ops) {
    const MatX ldl = l.adjoint() * l;
    out += kron(l.conjugate(), l) - 0.5 * (kron(id, ldl) + kron(ldl.transpose(), id));
  }
  return out;
}

void check_trace(const MatX& rho, const char* where) {
  const double drift = std::abs(rho.trace() - 1.0);
  if (drift > 1e-8) {
    throw IntegrationError(fmt::format("{}: trace drifted by {:.3e}", where, drift));
  }
}

}  // namespace

LevelModel model_for_dimension(Eigen::Index d) {
  if (d == 2) return LevelModel::TwoLevel;
  if (d == 3) return LevelModel::ThreeLevel;
  throw DomainError(fmt::format("unsupported Hilbert-space dimension {}", d));
}

Mat2 qubit_hamiltonian(const FieldVector& b) {
  return 0.5 * (b.bx * pauli::x() + b.by * pauli::y() + b.bz * pauli::z());
}

Mat3 spin_x3() {
  const double r2 = std::numbers::sqrt2;
  Mat3 s;
  s << 0, 1, 0, 1, 0, r2, 0, r2, 0;
  return s;
}

Mat3 spin_y3() {
  const double r2 = std::numbers::sqrt2;
  Mat3 s;
  s << 0, -kI, 0, kI, 0, -kI * r2, 0, kI * r2, 0;
  return s;
}

Mat3 spin_z3() {
  Mat3 s = Mat3::Zero();
  s.diagonal() << 1, -1, -3;
  return s;
}

Mat3 transmon_hamiltonian(const FieldVector& b, double delta2) {
  Mat3 h = 0.5 * (b.bx * spin_x3() + b.by * spin_y3() + b.bz * spin_z3());
  h(2, 2) += delta2;
  return h;
}

DensityMatrix DensityMatrix::pure(const VecX& psi) {
  const VecX n = psi / psi.norm();
  return {n * n.adjoint()};
}

DensityMatrix DensityMatrix::embedded(LevelModel target) const {
  const int d = dimension(target);
  if (d == matrix.rows()) return *this;
  if (matrix.rows() != 2) throw DomainError("only qubit states can be embedded");
  MatX out = MatX::Zero(d, d);
  out.topLeftCorner(2, 2) = matrix;
  return {out};
}

bool is_density_matrix(const MatX& rho, double herm_tol, double trace_tol, double eig_tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) return false;
  if (max_abs(rho - rho.adjoint()) > herm_tol) return false;
  if (std::abs(rho.trace() - 1.0) > trace_tol) return false;
  const MatX herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<MatX> eig(herm);
  return eig.eigenvalues().minCoeff() >= -eig_tol;
}

double purity(const MatX& rho) { return (rho * rho).trace().real(); }

void DecoherenceParams::validate() const {
  if (t1_ns && !(*t1_ns > 0.0)) throw DomainError(fmt::format("T1 must be positive, got {}", *t1_ns));
  if (tphi_ns && !(*tphi_ns > 0.0)) {
    throw DomainError(fmt::format("Tphi must be positive, got {}", *tphi_ns));
  }
}

double pure_dephasing_time(double t1_ns, double t2_star_ns, DephasingConvention convention) {
  if (convention == DephasingConvention::Pure) return t2_star_ns;
  const double rate = 1.0 / t2_star_ns - 1.0 / (2.0 * t1_ns);
  if (!(rate > 0.0)) {
    throw DomainError(fmt::format("T2* = {} ns exceeds 2 T1 = {} ns", t2_star_ns, 2.0 * t1_ns));
  }
  return 1.0 / rate;
}

Channel::Channel(MatX superop, LevelModel model) : superop_(std::move(superop)), model_(model) {
  const int d = dimension(model_);
  if (superop_.rows() != d * d || superop_.cols() != d * d) {
    throw DomainError("superoperator size does not match the level model");
  }
}

Channel Channel::identity(LevelModel model) {
  const int d = dimension(model);
  return Channel(MatX::Identity(d * d, d * d), model);
}

Channel Channel::unitary(const MatX& u) {
  return Channel(kron(u.conjugate(), u), model_for_dimension(u.rows()));
}

MatX Channel::apply(const MatX& rho) const {
  return unvectorize(superop_ * vectorize(rho), rho.rows());
}

Channel Channel::then(const Channel& next) const {
  if (next.model_ != model_) throw DomainError("cannot compose channels of different models");
  return Channel(next.superop_ * superop_, model_);
}

MatX vectorize(const MatX& rho) {
  return Eigen::Map<const VecX>(rho.data(), rho.size());
}

MatX unvectorize(const MatX& v, Eigen::Index d) { return Eigen::Map<const MatX>(v.data(), d, d); }

Propagator evolve_unitary(const ControlWaveform& w, LevelModel model, double delta2) {
  const int d = dimension(model);
  MatX u = MatX::Identity(d, d);
  for (const FieldVector& b : w.samples()) {
    u = step_exponential(b, model, delta2, w.dt()) * u;
  }
  const double defect = unitarity_defect(u);
  if (defect > 1e-6) {
    throw IntegrationError(fmt::format("propagator lost unitarity ({:.3e})", defect));
  }
  return {u, model};
}

std::vector<VecX> evolve_state_trajectory(const ControlWaveform& w, LevelModel model,
                                          double delta2, const VecX& psi0) {
  if (psi0.size() != dimension(model)) throw DomainError("initial state has the wrong dimension");
  std::vector<VecX> out;
  out.reserve(w.size() + 1);
  out.push_back(psi0);
  for (const FieldVector& b : w.samples()) {
    out.push_back(step_exponential(b, model, delta2, w.dt()) * out.back());
  }
  return out;
}

DensityMatrix evolve_lindblad(const ControlWaveform& w, LevelModel model, double delta2,
                              const DensityMatrix& rho0, const DecoherenceParams& dec) {
  dec.validate();
  if (rho0.matrix.rows() != dimension(model)) {
    throw DomainError("initial density matrix has the wrong dimension");
  }
  if (!is_density_matrix(rho0.matrix)) throw DomainError("initial density matrix is not valid");

  const std::vector<MatX> ops = collapse_operators(model, dec);
  const double h = w.dt();
  MatX rho = rho0.matrix;
  for (const FieldVector& b : w.samples()) {
    const MatX ham = hamiltonian(b, model, delta2);
    const MatX k1 = lindblad_rhs(ham, ops, rho);
    const MatX k2 = lindblad_rhs(ham, ops, rho + 0.5 * h * k1);
    const MatX k3 = lindblad_rhs(ham, ops, rho + 0.5 * h * k2);
    const MatX k4 = lindblad_rhs(ham, ops, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  check_trace(rho, "Lindblad evolution");
  return {rho};
}

Channel lindblad_channel(const ControlWaveform& w, LevelModel model, double delta2,
                         const DecoherenceParams& dec) {
  dec.validate();
  const int d = dimension(model);
  const int n = d * d;
  const std::vector<MatX> ops = collapse_operators(model, dec);
  const MatX id = MatX::Identity(n, n);
  MatX total = id;
  for (const FieldVector& b : w.samples()) {
    const MatX hl = w.dt() * liouvillian(hamiltonian(b, model, delta2), ops);
    // Horner form of the degree-4 Taylor polynomial, i.e. one RK4 step.
    const MatX step = id + hl * (id + hl * (id + hl * (id + hl / 4.0) / 3.0) / 2.0);
    total = step * total;
  }
  // Trace preservation: vec(I)^T acts as a left eigenvector with eigenvalue 1.
  const MatX row = vectorize(MatX::Identity(d, d)).transpose();
  const double drift = max_abs(row * total - row);
  if (drift > 1e-8) {
    throw IntegrationError(fmt::format("Lindblad channel: trace drifted by {:.3e}", drift));
  }
  return Channel(total, model);
}

Mat2 frame_rotation(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Mat2 m;
  m << c, s * std::exp(-kI * phi), -s * std::exp(kI * phi), c;
  return m;
}

PhasePair accumulated_phases(const GatePreset& preset, std::size_t steps) {
  if (steps < 1000) throw DomainError("phase quadrature needs at least 1000 steps");
  if (steps % 2 == 1) ++steps;
  const double T = preset.envelope.duration;
  const double h = T / static_cast<double>(steps);

  double dynamic = 0.0;
  Complex plus = 0.0;
  Complex minus = 0.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = k == steps ? T : static_cast<double>(k) * h;
    const double weight = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);

    const AngleSample a = preset.schedule.at(t);
    const double c = std::cos(a.theta / 2.0);
    const double s = std::sin(a.theta / 2.0);
    const Complex ep = std::exp(kI * a.phi);
    const Complex em = std::conj(ep);

    Eigen::Vector2cd psi_p(c, s * ep);
    Eigen::Vector2cd dpsi_p(-0.5 * s * a.theta_dot, (0.5 * c * a.theta_dot + kI * a.phi_dot * s) * ep);
    Eigen::Vector2cd psi_m(-s * em, c);
    Eigen::Vector2cd dpsi_m((-0.5 * c * a.theta_dot + kI * a.phi_dot * s) * em, -0.5 * s * a.theta_dot);

    dynamic += weight * (-0.5 * omega_envelope(t, preset.envelope));
    plus += weight * kI * psi_p.dot(dpsi_p);
    minus += weight * kI * psi_m.dot(dpsi_m);
  }
  const double scale = h / 3.0;
  PhasePair out;
  out.dynamic = scale * dynamic;
  out.geometric_plus = scale * plus.real();
  out.geometric_minus = scale * minus.real();
  out.imaginary_residual = scale * std::max(std::abs(plus.imag()), std::abs(minus.imag()));
  return out;
}

Mat2 adiabatic_gate(const GatePreset& preset) {
  const PhasePair phases = accumulated_phases(preset);
  const double T = preset.envelope.duration;
  const AngleSample start = preset.schedule.at(0.0);
  const AngleSample end = preset.schedule.at(T);
  Mat2 u_ad = Mat2::Identity();
  u_ad(1, 1) = std::exp(-kI * phases.delta_gamma());
  return frame_rotation(end.theta, end.phi).adjoint() * u_ad *
         frame_rotation(start.theta, start.phi);
}

Mat2 eigenbasis_propagator(const Mat2& lab_gate, const GatePreset& preset) {
  const AngleSample start = preset.schedule.at(0.0);
  const AngleSample end = preset.schedule.at(preset.envelope.duration);
  return frame_rotation(end.theta, end.phi) * lab_gate *
         frame_rotation(start.theta, start.phi).adjoint();
}

ControlWaveform gate_waveform(const GatePreset& preset, const GateSettings& settings) {
  const double dt = preset.envelope.duration / static_cast<double>(settings.steps);
  return synthesize_waveform(preset, settings.corrections, dt, settings.delta2);
}

Propagator sta_gate(const GatePreset& preset, const GateSettings& settings) {
  return evolve_unitary(gate_waveform(preset, settings), settings.model, settings.delta2);
}

Channel sta_gate(const GatePreset& preset, const GateSettings& settings,
                 const DecoherenceParams& dec) {
  return lindblad_channel(gate_waveform(preset, settings), settings.model, settings.delta2, dec);
}

double leakage(const Propagator& p) {
  if (p.model != LevelModel::ThreeLevel) return 0.0;
  const double h = std::numbers::sqrt2 / 2.0;
  const std::array<Eigen::Vector3cd, 6> inputs{
      Eigen::Vector3cd(1, 0, 0),      Eigen::Vector3cd(0, 1, 0),
      Eigen::Vector3cd(h, h, 0),      Eigen::Vector3cd(h, -h, 0),
      Eigen::Vector3cd(h, kI * h, 0), Eigen::Vector3cd(h, -kI * h, 0)};
  double worst = 0.0;
  for (const auto& psi : inputs) {
    const VecX out = p.matrix * psi;
    worst = std::max(worst, std::norm(out(2)));
  }
  return worst;
}

double unitary_gate_fidelity(const Mat2& u, const Mat2& v) {
  constexpr double d = 2.0;
  const double overlap = std::norm((u.adjoint() * v).trace());
  const double norm = (v.adjoint() * v).trace().real();
  return (norm + overlap) / (d * (d + 1.0));
}

}  // namespace sta
