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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sta/dynamics.hpp"
#include "sta/errors.hpp"
#include "sta/linalg.hpp"
#include "sta/rng.hpp"
#include "sta/tomography.hpp"

namespace sta {

// Generator set for Clifford decompositions, in tie-break order.
enum class Generator { I, X_pi, X_half, X_neg_half, Y_pi, Y_half, Y_neg_half };

inline constexpr std::array<Generator, 7> kGenerators{
    Generator::I,      Generator::X_pi,   Generator::X_half,    Generator::X_neg_half,
    Generator::Y_pi,   Generator::Y_half, Generator::Y_neg_half};

std::string_view to_string(Generator g);
PresetName preset_for(Generator g);

struct CliffordElement {
  int index = 0;
  Mat2 unitary;
  // Applied first to last.
  std::vector<Generator> decomposition;
};

inline constexpr int kCliffordCount = 24;

class CliffordTable {
 public:
  CliffordTable(std::vector<CliffordElement> elements,
                std::array<std::array<int, kCliffordCount>, kCliffordCount> product,
                std::array<int, kCliffordCount> inverse, int identity);

  const std::vector<CliffordElement>& elements() const { return elements_; }
  const CliffordElement& operator[](int i) const { return elements_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(elements_.size()); }

  // Index of U_a U_b (b applied first).
  int product(int a, int b) const { return product_[a][b]; }
  int inverse(int a) const { return inverse_[a]; }
  int identity() const { return identity_; }

  // Element equal to `u` up to global phase, if any.
  std::optional<int> find(const Mat2& u) const;

 private:
  std::vector<CliffordElement> elements_;
  std::array<std::array<int, kCliffordCount>, kCliffordCount> product_;
  std::array<int, kCliffordCount> inverse_;
  int identity_;
};

// Breadth-first enumeration of generator words up to length three, keeping
// the first (shortest, then lexicographically smallest) word per element.
// Throws ConstructionError unless exactly 24 elements appear.
CliffordTable build_clifford_table();

// Same-up-to-phase test: |Tr(U^dagger V)| = 2 within tol.
bool same_up_to_phase(const Mat2& u, const Mat2& v, double tol = 1e-9);

struct RbSequence {
  std::vector<int> cliffords;
  int recovery = 0;
};

// m uniform Clifford indices and the inverse of their product, composed on
// the multiplication table. With `interleaved`, that element follows every
// random Clifford.
RbSequence random_rb_sequence(int m, const CliffordTable& table, Rng& rng,
                              std::optional<int> interleaved = std::nullopt);

enum class RbMode {
  // Ideal Clifford unitaries followed by depolarizing noise; recovery ideal.
  Abstract,
  // Every generator realized by its simulated STA pulse.
  Pulse,
};

struct AbstractNoise {
  double clifford_p = 1.0;  // depolarizing parameter per random Clifford
  double gate_p = 1.0;      // depolarizing parameter of the interleaved gate
};

struct PulseChannelParams {
  EnvelopeParams envelope = EnvelopeParams::defaults();
  GateSettings gate;
  DecoherenceParams decoherence;
  // Idle time between consecutive pulses.
  double gap_ns = 0.0;
};

struct RbConfig {
  std::vector<int> lengths{1, 3, 6, 10, 20, 40, 70, 100, 150, 200, 300};
  int randomizations = 50;
  RbMode mode = RbMode::Pulse;
  AbstractNoise abstract_noise;
  PulseChannelParams pulse;
  // shots = nullopt gives exact P0; otherwise readout confusion applies (no
  // mitigation, SPAM is absorbed by A0 and B0).
  MeasurementModel measurement = MeasurementModel::exact_ideal();
  std::uint64_t seed = 1;
  std::optional<PresetName> interleaved;
  // 0 = hardware concurrency.
  unsigned threads = 1;

  // Throws DomainError on an invalid configuration.
  void validate() const;
};

struct RbPoint {
  int m = 0;
  double fidelity = 0.0;
  double std_error = 0.0;
};

// Precomputed channels for one RB setting: all 24 Cliffords, the recovery
// realization, and optionally an interleaved gate.
class RbChannels {
 public:
  RbChannels(const CliffordTable& table, const RbConfig& config);

  // Replaces the interleaved gate, reusing the Clifford channels.
  void set_interleaved(const CliffordTable& table, PresetName gate, const RbConfig& config);

  const Channel& clifford(int i) const { return cliffords_[static_cast<std::size_t>(i)]; }
  const Channel& recovery(int i) const { return recoveries_[static_cast<std::size_t>(i)]; }
  const std::optional<Channel>& interleaved() const { return interleaved_; }
  std::optional<int> interleaved_index() const { return interleaved_index_; }
  LevelModel model() const { return model_; }

 private:
  LevelModel model_;
  std::vector<Channel> cliffords_;
  std::vector<Channel> recoveries_;
  std::optional<Channel> interleaved_;
  std::optional<int> interleaved_index_;
};

// Reference RB; the interleaved field of the config is ignored.
std::vector<RbPoint> run_rb(const RbConfig& config);
// Interleaved RB; throws UnsupportedGateError if the gate is not a Clifford.
std::vector<RbPoint> run_interleaved_rb(const RbConfig& config);

// Shared by the two entry points and by cmd_rb, which reuses one table.
std::vector<RbPoint> run_rb_sequences(const CliffordTable& table, const RbChannels& channels,
                                      const RbConfig& config, bool interleave);

struct RbFit {
  double a0 = 0.0;
  double p = 0.0;
  double b0 = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // (A0, p, B0)
  double residual_norm = 0.0;
  int iterations = 0;

  double p_stderr() const { return std::sqrt(std::max(covariance(1, 1), 0.0)); }
};

class FitError : public Error {
 public:
  FitError(const std::string& message, RbFit best) : Error(message), best_(best) {}
  const RbFit& best() const { return best_; }

 private:
  RbFit best_;
};

// Data without a measurable decay (A0 indistinguishable from zero).
class DegenerateDecayError : public FitError {
 public:
  using FitError::FitError;
};

// Levenberg-Marquardt fit of F = A0 p^m + B0. Needs >= 4 distinct lengths.
RbFit fit_decay(const std::vector<RbPoint>& points);

// r = (d - 1)(1 - p) / d with d = 2^n.
double average_error(double p, int n_qubits);

struct GateFidelity {
  double value = 0.0;
  double std_error = 0.0;
  // p' > p: interleaving appeared to help, a statistical fluctuation.
  bool warning = false;
};

// F_g = 1 - (d - 1)/d (1 - p'/p).
GateFidelity interleaved_gate_fidelity(double p_ref, double p_interleaved, int n_qubits);
GateFidelity interleaved_gate_fidelity(const RbFit& reference, const RbFit& interleaved,
                                       int n_qubits);

}  // namespace sta
