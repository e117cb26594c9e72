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
#include <string>
#include <string_view>
#include <vector>

#include "sta/linalg.hpp"

namespace sta {

// Angular frequencies are rad/ns throughout. "MHz" values at the edges of
// the program are f with B = 2*pi*f*1e-3 rad/ns.
inline double mhz_to_rad_per_ns(double mhz) { return 2.0 * kPi * mhz * 1e-3; }
inline double rad_per_ns_to_mhz(double w) { return w / (2.0 * kPi) * 1e3; }

inline constexpr double kDefaultAmplitudeMhz = 20.0;
inline constexpr double kDefaultDurationNs = 30.0;
inline constexpr double kDefaultAnharmonicityMhz = -253.0;
inline constexpr std::size_t kDefaultSteps = 3000;
inline constexpr std::size_t kMinSteps = 100;

struct FieldVector {
  double bx = 0.0;
  double by = 0.0;
  double bz = 0.0;

  FieldVector& operator+=(const FieldVector& o) {
    bx += o.bx;
    by += o.by;
    bz += o.bz;
    return *this;
  }
  friend FieldVector operator+(FieldVector a, const FieldVector& b) { return a += b; }
  friend FieldVector operator-(const FieldVector& a, const FieldVector& b) {
    return {a.bx - b.bx, a.by - b.by, a.bz - b.bz};
  }
  friend FieldVector operator*(double s, const FieldVector& v) {
    return {s * v.bx, s * v.by, s * v.bz};
  }
  friend bool operator==(const FieldVector&, const FieldVector&) = default;

  double dot(const FieldVector& o) const { return bx * o.bx + by * o.by + bz * o.bz; }
  FieldVector cross(const FieldVector& o) const {
    return {by * o.bz - bz * o.by, bz * o.bx - bx * o.bz, bx * o.by - by * o.bx};
  }
  double norm() const;
  bool finite() const;
};

// c0 + c1 * [1 - cos(pi t / T)]: the ramp shape shared by every preset angle.
// First and second derivatives are exact.
struct CosineRamp {
  double offset = 0.0;
  double amplitude = 0.0;

  double value(double t, double duration) const;
  double rate(double t, double duration) const;
  double acceleration(double t, double duration) const;
  double terminal() const { return offset + 2.0 * amplitude; }
};

// Polar/azimuthal angles of the field direction and their first two time
// derivatives at one instant.
struct AngleSample {
  double theta = 0.0;
  double phi = 0.0;
  double theta_dot = 0.0;
  double phi_dot = 0.0;
  double theta_ddot = 0.0;
  double phi_ddot = 0.0;
};

// theta(t), phi(t) of the reference field direction n = B0 / Omega.
//
// Two geometries exist. A polar schedule ramps theta and phi directly. A
// tilted-equator schedule describes the Hadamard field, whose direction
// (cos(s)/sqrt2, sin(s), -cos(s)/sqrt2) sweeps a great circle through the
// x-z diagonal as the drive phase s ramps; theta and phi are then the true
// spherical angles of that direction, which is what the frame rotation and
// the counter-diabatic components need.
class AngleSchedule {
 public:
  enum class Geometry { Polar, TiltedEquator };

  static AngleSchedule polar(CosineRamp theta, CosineRamp phi, double duration);
  static AngleSchedule tilted_equator(CosineRamp drive_phase, double duration);

  AngleSample at(double t) const;
  double theta(double t) const { return at(t).theta; }
  double phi(double t) const { return at(t).phi; }
  double theta_dot(double t) const { return at(t).theta_dot; }
  double phi_dot(double t) const { return at(t).phi_dot; }

  Geometry geometry() const { return geometry_; }
  double duration() const { return duration_; }
  // Only meaningful for the tilted-equator geometry.
  const CosineRamp& drive_phase() const { return first_; }

 private:
  AngleSchedule(Geometry g, CosineRamp a, CosineRamp b, double duration)
      : geometry_(g), first_(a), second_(b), duration_(duration) {}

  Geometry geometry_;
  CosineRamp first_;
  CosineRamp second_;
  double duration_;
};

struct EnvelopeParams {
  double amplitude;  // A, rad/ns
  double duration;   // T, ns

  // Throws DomainError unless both are positive and finite.
  static EnvelopeParams make(double amplitude, double duration);
  static EnvelopeParams defaults();
};

enum class PresetName {
  X_pi,
  X_half,
  X_neg_half,
  Y_pi,
  Y_half,
  Y_neg_half,
  Z_pi,
  Z_half,
  Hadamard,
  Identity,
};

inline constexpr std::array<PresetName, 10> kAllPresets{
    PresetName::X_pi,     PresetName::X_half,     PresetName::X_neg_half, PresetName::Y_pi,
    PresetName::Y_half,   PresetName::Y_neg_half, PresetName::Z_pi,       PresetName::Z_half,
    PresetName::Hadamard, PresetName::Identity};

std::string_view to_string(PresetName name);
std::optional<PresetName> parse_preset_name(std::string_view text);

// Component layout of the reference field.
enum class FieldForm { X, Y, Z, Hadamard, Identity };

struct GatePreset {
  PresetName name;
  AngleSchedule schedule;
  EnvelopeParams envelope;
  FieldForm form;
  Mat2 target_unitary;
};

GatePreset make_preset(PresetName name, const EnvelopeParams& envelope);
Mat2 target_unitary(PresetName name);

struct Corrections {
  bool counter_diabatic = false;
  bool drag = false;

  friend bool operator==(const Corrections&, const Corrections&) = default;
};

enum class Provenance { Reference, CounterDiabatic, CounterDiabaticDrag, Synthetic };
std::string_view to_string(Provenance p);

// Field samples at the midpoints t_k = (k + 1/2) dt of a uniform grid.
class ControlWaveform {
 public:
  // Throws ResolutionError if dt <= 0 or samples.size() * dt != duration.
  ControlWaveform(double dt, std::vector<FieldVector> samples, double duration,
                  Provenance provenance);

  static ControlWaveform constant(const FieldVector& b, double duration, std::size_t steps);
  static ControlWaveform zero(double duration, std::size_t steps) {
    return constant({}, duration, steps);
  }

  double dt() const { return dt_; }
  double duration() const { return duration_; }
  std::size_t size() const { return samples_.size(); }
  const std::vector<FieldVector>& samples() const { return samples_; }
  const FieldVector& operator[](std::size_t k) const { return samples_[k]; }
  double midpoint(std::size_t k) const { return (static_cast<double>(k) + 0.5) * dt_; }
  Provenance provenance() const { return provenance_; }

 private:
  double dt_;
  std::vector<FieldVector> samples_;
  double duration_;
  Provenance provenance_;
};

// Omega(t) = A sin(2 pi t / T).
double omega_envelope(double t, const EnvelopeParams& env);
double omega_envelope_rate(double t, const EnvelopeParams& env);

FieldVector reference_field(const GatePreset& preset, double t);
FieldVector reference_field_rate(const GatePreset& preset, double t);

// Component form of B_cd; regular everywhere, including envelope zeros.
FieldVector counter_diabatic_components(const AngleSchedule& schedule, double t);
FieldVector counter_diabatic_rate(const AngleSchedule& schedule, double t);

// (b0 x b0_dot) / |b0|^2. Throws SingularFieldError when b0 vanishes.
FieldVector counter_diabatic_cross(const FieldVector& b0, const FieldVector& b0_dot);

// First-order DRAG field for B = B0 + B_cd; z component is always zero.
FieldVector drag_correction(const FieldVector& b, const FieldVector& b_dot, double delta2);

// Total field and its components at a single instant.
struct FieldBreakdown {
  FieldVector reference;
  FieldVector counter_diabatic;
  FieldVector drag;
  FieldVector total;
};
FieldBreakdown field_at(const GatePreset& preset, const Corrections& corrections, double t,
                        double delta2);

double default_dt(double duration);

ControlWaveform synthesize_waveform(const GatePreset& preset, const Corrections& corrections,
                                    double dt, double delta2);

}  // namespace sta
