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

#include <array>
#include <cstdint>
#include <functional>
#include <optional>

#include "sta/dynamics.hpp"
#include "sta/linalg.hpp"
#include "sta/rng.hpp"

namespace sta {

inline constexpr double kDefaultReadoutFidelity0 = 0.998;
inline constexpr double kDefaultReadoutFidelity1 = 0.951;
inline constexpr std::uint64_t kDefaultShots = 3000;

struct MeasurementModel {
  // std::nullopt means exact expectation values.
  std::optional<std::uint64_t> shots = kDefaultShots;
  double readout_fidelity_0 = kDefaultReadoutFidelity0;
  double readout_fidelity_1 = kDefaultReadoutFidelity1;
  // Invert the readout confusion matrix before reconstructing.
  bool mitigate_readout = true;
  std::uint64_t rng_seed = 0;

  static MeasurementModel exact_ideal() { return {std::nullopt, 1.0, 1.0, true, 0}; }
  void validate() const;
  // Probability of reading "0" for a true ground-state probability p0.
  double read_zero_probability(double p0) const;
};

// |0>, |1>, |+>, |->, |+i>, |-i> in that order.
const std::array<Mat2, 6>& qpt_input_states();

// Per-axis Pauli measurement with optional binomial sampling and readout
// confusion, reconstructed as (I + r . sigma) / 2. A Bloch vector longer than
// one is rescaled onto the sphere.
Mat2 simulate_qst(const Mat2& rho, const MeasurementModel& mm, Rng& rng);

using QubitChannel = std::function<Mat2(const Mat2&)>;

// Wraps a channel on the qubit or three-level space. Three-level outputs are
// projected onto span{|0>, |1>} and renormalized.
QubitChannel qubit_channel(const Channel& channel);
QubitChannel unitary_qubit_channel(const Mat2& u);

struct QptDataset {
  std::array<Mat2, 6> inputs;
  std::array<Mat2, 6> outputs;
};

// Sampling for input j uses the stream derive_seed(mm.rng_seed, {j}).
QptDataset run_qpt(const QubitChannel& channel, const MeasurementModel& mm);

struct ChiMatrix {
  Mat4 values;
};

// Linear least-squares inversion of E(rho) = sum chi_mn P_m rho P_n^dagger.
// Throws ReconstructionError if the inputs do not span the operator space.
ChiMatrix reconstruct_chi(const QptDataset& data);
ChiMatrix ideal_chi(const Mat2& target_unitary);

struct ProcessFidelity {
  double value = 0.0;
  double raw = 0.0;
  // Raw value fell outside [0, 1] by more than 1e-6 and was clamped.
  bool clamped = false;
};

ProcessFidelity process_fidelity(const ChiMatrix& chi, const ChiMatrix& chi_ideal);

}  // namespace sta
