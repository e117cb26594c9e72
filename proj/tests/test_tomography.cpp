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

#include <algorithm>

#include <gtest/gtest.h>

#include "sta/errors.hpp"
#include "test_util.hpp"

namespace sta {
namespace {

const EnvelopeParams kEnv = EnvelopeParams::defaults();

double bloch_z(const Mat2& rho) { return (rho(0, 0) - rho(1, 1)).real(); }

Mat2 projector(int i) {
  Mat2 p = Mat2::Zero();
  p(i, i) = 1.0;
  return p;
}

// vec(K rho K^dagger) = (conj(K) kron K) vec(rho).
MatX kraus_superop(const std::vector<Mat2>& ks) {
  MatX s = MatX::Zero(4, 4);
  for (const Mat2& k : ks) {
    const Mat2 kc = k.conjugate();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) s.block(2 * i, 2 * j, 2, 2) += kc(i, j) * k;
    }
  }
  return s;
}

Channel amplitude_damping(double p) {
  Mat2 k0 = Mat2::Zero(), k1 = Mat2::Zero();
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - p);
  k1(0, 1) = std::sqrt(p);
  return Channel(kraus_superop({k0, k1}), LevelModel::TwoLevel);
}

MeasurementModel exact() { return MeasurementModel::exact_ideal(); }

MeasurementModel sampled(std::uint64_t shots, std::uint64_t seed, double f0 = 1.0,
                         double f1 = 1.0, bool mitigate = true) {
  return {shots, f0, f1, mitigate, seed};
}

TEST(InputStates, Examples) {
  const auto& s = qpt_input_states();
  EXPECT_LE(max_abs(s[0] - projector(0)), 0.0);
  Mat2 plus;
  plus << 0.5, 0.5, 0.5, 0.5;
  EXPECT_LE(max_abs(s[2] - plus), 1e-15);
  for (const Mat2& rho : s) {
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-15);
    EXPECT_NEAR(purity(rho), 1.0, 1e-15);
  }
}

TEST(Measurement, Validation) {
  EXPECT_THROW(sampled(0, 1).validate(), DomainError);
  EXPECT_THROW(sampled(10, 1, 0.4).validate(), DomainError);
  EXPECT_THROW(sampled(10, 1, 1.0, 1.01).validate(), DomainError);
  EXPECT_NO_THROW(MeasurementModel{}.validate());
  const MeasurementModel paper;
  EXPECT_NEAR(paper.read_zero_probability(1.0), 0.998, 1e-15);
  EXPECT_NEAR(paper.read_zero_probability(0.0), 0.049, 1e-15);
}

TEST(Qst, ExactIsIdentity) {
  std::mt19937_64 rng(1);
  Rng sampler(7);
  for (int i = 0; i < 20; ++i) {
    const Mat2 u = testing::random_unitary(rng);
    const Mat2 rho = u * projector(0) * u.adjoint() * 0.8 + 0.1 * Mat2::Identity();
    EXPECT_LE(max_abs(simulate_qst(rho, exact(), sampler) - rho), 1e-12);
  }
}

TEST(Qst, ShotNoise) {
  Rng rng(11);
  EXPECT_NEAR(bloch_z(simulate_qst(projector(0), sampled(1000000, 0), rng)), 1.0, 5e-3);
  const Mat2 one = simulate_qst(projector(1), sampled(1000000, 0, 0.998, 0.951, true), rng);
  EXPECT_NEAR(bloch_z(one), -1.0, 5e-3);
  const Mat2 raw = simulate_qst(projector(1), sampled(1000000, 0, 0.998, 0.951, false), rng);
  EXPECT_NEAR(bloch_z(raw), -(0.951 - (1 - 0.951)), 5e-3);
}

TEST(Qst, OutputIsPhysical) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Mat2 rho = simulate_qst(projector(i % 2), sampled(20, 0, 0.998, 0.951, true), rng);
    EXPECT_TRUE(is_density_matrix(rho, 1e-12, 1e-12, 1e-10));
  }
}

TEST(Qpt, ChannelExamples) {
  const QptDataset id = run_qpt(unitary_qubit_channel(Mat2::Identity()), exact());
  for (int j = 0; j < 6; ++j) EXPECT_LE(max_abs(id.outputs[j] - id.inputs[j]), 1e-12);

  const QptDataset x = run_qpt(unitary_qubit_channel(target_unitary(PresetName::X_pi)), exact());
  EXPECT_LE(max_abs(x.outputs[0] - projector(1)), 1e-12);

  const QptDataset ad = run_qpt(qubit_channel(amplitude_damping(1.0)), exact());
  for (const Mat2& out : ad.outputs) EXPECT_LE(max_abs(out - projector(0)), 1e-12);
}

TEST(Chi, ReconstructionExamples) {
  const ChiMatrix id = reconstruct_chi(run_qpt(unitary_qubit_channel(Mat2::Identity()), exact()));
  Mat4 e = Mat4::Zero();
  e(0, 0) = 1.0;
  EXPECT_LE(max_abs(id.values - e), 1e-10);

  const ChiMatrix x =
      reconstruct_chi(run_qpt(unitary_qubit_channel(target_unitary(PresetName::X_pi)), exact()));
  e = Mat4::Zero();
  e(1, 1) = 1.0;
  EXPECT_LE(max_abs(x.values - e), 1e-10);

  const ChiMatrix xh =
      reconstruct_chi(run_qpt(unitary_qubit_channel(target_unitary(PresetName::X_half)), exact()));
  e = Mat4::Zero();
  e(0, 0) = 0.5;
  e(1, 1) = 0.5;
  e(0, 1) = Complex(0, 0.5);
  e(1, 0) = Complex(0, -0.5);
  EXPECT_LE(max_abs(xh.values - e), 1e-10);
}

TEST(Chi, IdealExamples) {
  Mat4 e = Mat4::Zero();
  e(0, 0) = 1.0;
  EXPECT_LE(max_abs(ideal_chi(Mat2::Identity()).values - e), 1e-15);
  e = Mat4::Zero();
  e(3, 3) = 1.0;
  EXPECT_LE(max_abs(ideal_chi(target_unitary(PresetName::Z_pi)).values - e), 1e-15);
  e = Mat4::Zero();
  e(1, 1) = e(3, 3) = e(1, 3) = e(3, 1) = 0.5;
  EXPECT_LE(max_abs(ideal_chi(target_unitary(PresetName::Hadamard)).values - e), 1e-15);
}

TEST(Chi, RoundTripRandomUnitaries) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 50; ++i) {
    const Mat2 u = testing::random_unitary(rng);
    const Mat2 phased = std::exp(Complex(0, 0.1 * i)) * u;
    const ChiMatrix chi = reconstruct_chi(run_qpt(unitary_qubit_channel(phased), exact()));
    EXPECT_LE(max_abs(chi.values - ideal_chi(u).values), 1e-9);
    EXPECT_NEAR(process_fidelity(chi, ideal_chi(u)).value, 1.0, 1e-9);
  }
}

TEST(Chi, LinearInversion) {
  const QptDataset a = run_qpt(unitary_qubit_channel(target_unitary(PresetName::Y_half)), exact());
  const QptDataset b = run_qpt(qubit_channel(amplitude_damping(0.3)), exact());
  const double w = 0.35;
  QptDataset mix = a;
  for (int j = 0; j < 6; ++j) mix.outputs[j] = w * a.outputs[j] + (1 - w) * b.outputs[j];
  const Mat4 expected = w * reconstruct_chi(a).values + (1 - w) * reconstruct_chi(b).values;
  EXPECT_LE(max_abs(reconstruct_chi(mix).values - expected), 1e-9);
}

TEST(Chi, HermitianUnitTraceForDecoherentGate) {
  GateSettings s;
  const Channel ch = sta_gate(make_preset(PresetName::Z_half, kEnv), s, {20000.0, 38000.0});
  const ChiMatrix chi = reconstruct_chi(run_qpt(qubit_channel(ch), exact()));
  EXPECT_LE(max_abs(chi.values - chi.values.adjoint()), 1e-9);
  EXPECT_NEAR(chi.values.trace().real(), 1.0, 1e-9);
  EXPECT_NEAR(chi.values.trace().imag(), 0.0, 1e-9);
}

TEST(Chi, RankDeficientDataset) {
  QptDataset bad = run_qpt(unitary_qubit_channel(Mat2::Identity()), exact());
  for (auto& rho : bad.inputs) rho = projector(0);
  EXPECT_THROW(reconstruct_chi(bad), ReconstructionError);
}

TEST(Chi, ShotConvergence) {
  const QubitChannel ch = unitary_qubit_channel(target_unitary(PresetName::X_half));
  const Mat4 truth = reconstruct_chi(run_qpt(ch, exact())).values;
  double previous = 1.0;
  for (std::uint64_t shots : {1000ull, 100000ull, 10000000ull}) {
    std::vector<double> errs;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      errs.push_back(max_abs(reconstruct_chi(run_qpt(ch, sampled(shots, seed))).values - truth));
    }
    std::nth_element(errs.begin(), errs.begin() + 10, errs.end());
    EXPECT_LT(errs[10], previous) << shots;
    previous = errs[10];
  }
}

TEST(Qpt, SeededDeterminism) {
  const QubitChannel ch = unitary_qubit_channel(target_unitary(PresetName::Hadamard));
  const MeasurementModel mm = sampled(3000, 42, 0.998, 0.951);
  const QptDataset a = run_qpt(ch, mm);
  const QptDataset b = run_qpt(ch, mm);
  for (int j = 0; j < 6; ++j) EXPECT_EQ(a.outputs[j], b.outputs[j]);
  const QptDataset c = run_qpt(ch, sampled(3000, 43, 0.998, 0.951));
  EXPECT_NE(a.outputs[0], c.outputs[0]);
}

TEST(ProcessFidelity, Clamping) {
  const ChiMatrix ideal = ideal_chi(target_unitary(PresetName::X_pi));
  EXPECT_NEAR(process_fidelity(ideal, ideal).value, 1.0, 1e-15);
  EXPECT_FALSE(process_fidelity(ideal, ideal).clamped);
  ChiMatrix over = ideal;
  over.values *= 1.01;
  const ProcessFidelity f = process_fidelity(over, ideal);
  EXPECT_TRUE(f.clamped);
  EXPECT_EQ(f.value, 1.0);
  EXPECT_NEAR(f.raw, 1.01, 1e-12);
}

}  // namespace
}  // namespace sta
