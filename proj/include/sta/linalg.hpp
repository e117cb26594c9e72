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
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace sta {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

namespace pauli {

inline Mat2 identity() { return Mat2::Identity(); }

inline Mat2 x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

inline Mat2 y() {
  Mat2 m;
  m << 0, -kI, kI, 0;
  return m;
}

inline Mat2 z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

// Ordered {I, X, Y, Z}; this order is used for every chi-matrix index.
inline const std::array<Mat2, 4>& basis() {
  static const std::array<Mat2, 4> b{identity(), x(), y(), z()};
  return b;
}

}  // namespace pauli

// Largest absolute entry.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

// max |U - e^{ia} V| with the phase a chosen to align the two matrices.
inline double phase_distance(const MatX& u, const MatX& v) {
  const Complex overlap = (v.adjoint() * u).trace();
  const Complex phase =
      std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
  return max_abs(u - phase * v);
}

inline double unitarity_defect(const MatX& u) {
  return max_abs(u.adjoint() * u - MatX::Identity(u.rows(), u.cols()));
}

}  // namespace sta
