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

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sta/linalg.hpp"
#include "sta/pulse_synthesis.hpp"

namespace sta {

enum class LevelModel { TwoLevel, ThreeLevel };

inline int dimension(LevelModel m) { return m == LevelModel::TwoLevel ? 2 : 3; }
LevelModel model_for_dimension(Eigen::Index d);

// H = B . sigma / 2 (hbar = 1).
Mat2 qubit_hamiltonian(const FieldVector& b);

// Ladder-operator vector S of a three-level anharmonic oscillator.
Mat3 spin_x3();
Mat3 spin_y3();
Mat3 spin_z3();

// H = B . S / 2 + delta2 |2><2|.
Mat3 transmon_hamiltonian(const FieldVector& b, double delta2);

struct Propagator {
  MatX matrix;
  LevelModel model;

  // Upper-left 2x2 block (the full matrix for the two-level model).
  Mat2 qubit_block() const { return matrix.topLeftCorner<2, 2>(); }
};

struct DensityMatrix {
  MatX matrix;

  LevelModel model() const { return model_for_dimension(matrix.rows()); }

  static DensityMatrix pure(const VecX& psi);
  // Embeds a qubit state into the three-level space (zero population in |2>).
  DensityMatrix embedded(LevelModel target) const;
};

// Hermitian, unit trace, and no eigenvalue below -eig_tol.
bool is_density_matrix(const MatX& rho, double herm_tol = 1e-12, double trace_tol = 1e-12,
                       double eig_tol = 1e-10);
double purity(const MatX& rho);

// Absent times mean the corresponding process is switched off.
struct DecoherenceParams {
  std::optional<double> t1_ns;
  std::optional<double> tphi_ns;

  bool closed() const { return !t1_ns && !tphi_ns; }
  // Throws DomainError for non-positive times.
  void validate() const;
};

enum class DephasingConvention {
  // Tphi is the measured T2* itself.
  Pure,
  // Tphi from 1/T2* = 1/(2 T1) + 1/Tphi.
  FromT2,
};

// Pure-dephasing time for a measured (T1, T2*) pair under a convention.
double pure_dephasing_time(double t1_ns, double t2_star_ns, DephasingConvention convention);

// Linear map on density matrices in the column-stacking Liouville
// representation: vec(E(rho)) = superop * vec(rho).
class Channel {
 public:
  Channel(MatX superop, LevelModel model);

  static Channel identity(LevelModel model);
  static Channel unitary(const MatX& u);

  MatX apply(const MatX& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const { return {apply(rho.matrix)}; }
  // The channel that applies *this first and then `next`.
  Channel then(const Channel& next) const;

  const MatX& superop() const { return superop_; }
  LevelModel model() const { return model_; }

 private:
  MatX superop_;
  LevelModel model_;
};

MatX vectorize(const MatX& rho);
MatX unvectorize(const MatX& v, Eigen::Index d);

// Piecewise-constant midpoint Hamiltonian with an exact exponential per step;
// later steps multiply on the left. Throws IntegrationError if the result
// drifts from unitarity by more than 1e-6.
Propagator evolve_unitary(const ControlWaveform& w, LevelModel model, double delta2);

// State after each step, starting with psi0 at t = 0 (size() + 1 entries).
std::vector<VecX> evolve_state_trajectory(const ControlWaveform& w, LevelModel model,
                                          double delta2, const VecX& psi0);

// Classical RK4 on the full master equation over the waveform grid. No trace
// renormalization: drift above 1e-8 raises IntegrationError.
DensityMatrix evolve_lindblad(const ControlWaveform& w, LevelModel model, double delta2,
                              const DensityMatrix& rho0, const DecoherenceParams& dec);

// The same RK4 propagation assembled as a superoperator.
Channel lindblad_channel(const ControlWaveform& w, LevelModel model, double delta2,
                         const DecoherenceParams& dec);

// Frame change S(theta, phi); its adjoint's columns are the
// instantaneous eigenstates |psi+>, |psi->.
Mat2 frame_rotation(double theta, double phi);

struct PhasePair {
  double dynamic = 0.0;
  double geometric_plus = 0.0;
  double geometric_minus = 0.0;
  // Largest |Im| of the accumulated geometric integrals; zero for exact math.
  double imaginary_residual = 0.0;

  double delta_gamma() const { return geometric_plus - geometric_minus; }
};

// Composite Simpson quadrature over [0, T] with `steps` intervals (>= 1000).
PhasePair accumulated_phases(const GatePreset& preset, std::size_t steps = 4000);

// S^dagger(T) diag(1, exp(-i dgamma)) S(0).
Mat2 adiabatic_gate(const GatePreset& preset);

// S(T) U S^dagger(0): the gate expressed in the instantaneous eigenbasis.
Mat2 eigenbasis_propagator(const Mat2& lab_gate, const GatePreset& preset);

struct GateSettings {
  Corrections corrections{true, true};
  LevelModel model = LevelModel::ThreeLevel;
  double delta2 = mhz_to_rad_per_ns(kDefaultAnharmonicityMhz);
  std::size_t steps = kDefaultSteps;
};

ControlWaveform gate_waveform(const GatePreset& preset, const GateSettings& settings);

// Closed-system gate in the reference basis.
Propagator sta_gate(const GatePreset& preset, const GateSettings& settings);
// Open-system gate.
Channel sta_gate(const GatePreset& preset, const GateSettings& settings,
                 const DecoherenceParams& dec);

// Worst-case |2> population over the six cardinal qubit inputs.
double leakage(const Propagator& p);

// (Tr(V^dagger V) + |Tr(U^dagger V)|^2) / (d (d + 1)) with d = 2. Reduces to
// (|Tr(U^dagger V)|^2 + d) / (d (d + 1)) when V is unitary and accounts for
// leakage when V is the qubit block of a larger propagator.
double unitary_gate_fidelity(const Mat2& u, const Mat2& v);

}  // namespace sta
