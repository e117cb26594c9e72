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

#include "sta/tomography.hpp"

#include <cmath>

#include <fmt/format.h>

#include "sta/errors.hpp"

namespace sta {

void MeasurementModel::validate() const {
  auto check = [](double f, const char* which) {
    if (!(f > 0.5 && f <= 1.0)) {
      throw DomainError(fmt::format("{} must lie in (0.5, 1], got {}", which, f));
    }
  };
  check(readout_fidelity_0, "readout_fidelity_0");
  check(readout_fidelity_1, "readout_fidelity_1");
  if (shots && *shots == 0) throw DomainError("shots must be at least 1");
}

double MeasurementModel::read_zero_probability(double p0) const {
  return readout_fidelity_0 * p0 + (1.0 - readout_fidelity_1) * (1.0 - p0);
}

const std::array<Mat2, 6>& qpt_input_states() {
  static const std::array<Mat2, 6> states = [] {
    const double h = std::numbers::sqrt2 / 2.0;
    const std::array<Eigen::Vector2cd, 6> kets{
        Eigen::Vector2cd(1, 0),      Eigen::Vector2cd(0, 1),       Eigen::Vector2cd(h, h),
        Eigen::Vector2cd(h, -h),     Eigen::Vector2cd(h, kI * h),  Eigen::Vector2cd(h, -kI * h)};
    std::array<Mat2, 6> out;
    for (std::size_t j = 0; j < kets.size(); ++j) out[j] = kets[j] * kets[j].adjoint();
    return out;
  }();
  return states;
}

Mat2 simulate_qst(const Mat2& rho, const MeasurementModel& mm, Rng& rng) {
  mm.validate();
  const std::array<Mat2, 3> axes{pauli::x(), pauli::y(), pauli::z()};
  const double contrast = mm.readout_fidelity_0 + mm.readout_fidelity_1 - 1.0;

  Eigen::Vector3d r;
  for (int a = 0; a < 3; ++a) {
    const double expectation = (rho * axes[a]).trace().real();
    const double p0 = std::clamp(0.5 * (1.0 + expectation), 0.0, 1.0);
    double q0 = mm.read_zero_probability(p0);
    if (mm.shots) {
      std::binomial_distribution<std::uint64_t> counts(*mm.shots, q0);
      q0 = static_cast<double>(counts(rng)) / static_cast<double>(*mm.shots);
    }
    if (mm.mitigate_readout) q0 = (q0 - (1.0 - mm.readout_fidelity_1)) / contrast;
    r(a) = 2.0 * q0 - 1.0;
  }
  const double len = r.norm();
  if (len > 1.0) r /= len;
  return 0.5 * (Mat2::Identity() + r(0) * axes[0] + r(1) * axes[1] + r(2) * axes[2]);
}

QubitChannel qubit_channel(const Channel& channel) {
  return [channel](const Mat2& rho) -> Mat2 {
    if (channel.model() == LevelModel::TwoLevel) return channel.apply(MatX(rho));
    MatX full = MatX::Zero(3, 3);
    full.topLeftCorner(2, 2) = rho;
    const Mat2 block = channel.apply(full).topLeftCorner(2, 2);
    const Complex tr = block.trace();
    if (std::abs(tr) == 0.0) throw DomainError("state fully leaked out of the qubit subspace");
    return block / tr;
  };
}

QubitChannel unitary_qubit_channel(const Mat2& u) {
  return [u](const Mat2& rho) -> Mat2 { return u * rho * u.adjoint(); };
}

QptDataset run_qpt(const QubitChannel& channel, const MeasurementModel& mm) {
  QptDataset data;
  data.inputs = qpt_input_states();
  for (std::size_t j = 0; j < data.inputs.size(); ++j) {
    Rng rng(derive_seed(mm.rng_seed, {j}));
    data.outputs[j] = simulate_qst(channel(data.inputs[j]), mm, rng);
  }
  return data;
}

ChiMatrix reconstruct_chi(const QptDataset& data) {
  const auto& basis = pauli::basis();
  const Eigen::Index rows = static_cast<Eigen::Index>(data.inputs.size()) * 4;
  MatX design(rows, 16);
  VecX rhs(rows);
  for (std::size_t j = 0; j < data.inputs.size(); ++j) {
    const Eigen::Index base = static_cast<Eigen::Index>(j) * 4;
    for (int m = 0; m < 4; ++m) {
      for (int n = 0; n < 4; ++n) {
        const Mat2 term = basis[m] * data.inputs[j] * basis[n].adjoint();
        for (int e = 0; e < 4; ++e) design(base + e, 4 * m + n) = term(e % 2, e / 2);
      }
    }
    for (int e = 0; e < 4; ++e) rhs(base + e) = data.outputs[j](e % 2, e / 2);
  }

  Eigen::JacobiSVD<MatX> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() < 16 || sv(15) <= 1e-10 * sv(0)) {
    throw ReconstructionError("QPT inputs do not determine the chi matrix (rank deficient)");
  }
  const VecX x = svd.solve(rhs);

  ChiMatrix chi;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) chi.values(m, n) = x(4 * m + n);
  }
  return chi;
}

ChiMatrix ideal_chi(const Mat2& target_unitary) {
  const auto& basis = pauli::basis();
  Eigen::Vector4cd e;
  for (int m = 0; m < 4; ++m) e(m) = 0.5 * (basis[m].adjoint() * target_unitary).trace();
  return {e * e.adjoint()};
}

ProcessFidelity process_fidelity(const ChiMatrix& chi, const ChiMatrix& chi_ideal) {
  ProcessFidelity out;
  out.raw = (chi.values * chi_ideal.values).trace().real();
  out.value = std::clamp(out.raw, 0.0, 1.0);
  out.clamped = out.raw < -1e-6 || out.raw > 1.0 + 1e-6;
  return out;
}

}  // namespace sta
