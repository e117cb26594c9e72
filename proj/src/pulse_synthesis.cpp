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

#include "sta/pulse_synthesis.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "sta/errors.hpp"

namespace sta {

namespace {

constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

void check_time(double t, double duration) {
  if (!(t >= 0.0 && t <= duration)) {
    throw DomainError(fmt::format("time {} ns outside [0, {}] ns", t, duration));
  }
}

}  // namespace

double FieldVector::norm() const { return std::sqrt(dot(*this)); }

bool FieldVector::finite() const {
  return std::isfinite(bx) && std::isfinite(by) && std::isfinite(bz);
}

double CosineRamp::value(double t, double duration) const {
  return offset + amplitude * (1.0 - std::cos(kPi * t / duration));
}

double CosineRamp::rate(double t, double duration) const {
  const double w = kPi / duration;
  return amplitude * w * std::sin(w * t);
}

double CosineRamp::acceleration(double t, double duration) const {
  const double w = kPi / duration;
  return amplitude * w * w * std::cos(w * t);
}

AngleSchedule AngleSchedule::polar(CosineRamp theta, CosineRamp phi, double duration) {
  return {Geometry::Polar, theta, phi, duration};
}

AngleSchedule AngleSchedule::tilted_equator(CosineRamp drive_phase, double duration) {
  return {Geometry::TiltedEquator, drive_phase, CosineRamp{}, duration};
}

AngleSample AngleSchedule::at(double t) const {
  AngleSample out;
  if (geometry_ == Geometry::Polar) {
    out.theta = first_.value(t, duration_);
    out.theta_dot = first_.rate(t, duration_);
    out.theta_ddot = first_.acceleration(t, duration_);
    out.phi = second_.value(t, duration_);
    out.phi_dot = second_.rate(t, duration_);
    out.phi_ddot = second_.acceleration(t, duration_);
    return out;
  }

  // Direction (cos s / sqrt2, sin s, -cos s / sqrt2):
  //   cos(theta) = u = -cos(s)/sqrt2,  phi = atan2(sin s, cos(s)/sqrt2).
  // The direction never reaches a pole (|u| <= 1/sqrt2), so both angles are
  // smooth along the whole ramp.
  const double s = first_.value(t, duration_);
  const double sd = first_.rate(t, duration_);
  const double sdd = first_.acceleration(t, duration_);
  const double cs = std::cos(s);
  const double ss = std::sin(s);

  const double u = -cs / std::numbers::sqrt2;
  const double ud = ss * sd / std::numbers::sqrt2;
  const double udd = (cs * sd * sd + ss * sdd) / std::numbers::sqrt2;
  const double w = std::sqrt(1.0 - u * u);
  out.theta = std::acos(u);
  out.theta_dot = -ud / w;
  out.theta_ddot = -udd / w - u * ud * ud / (w * w * w);

  const double g = 1.0 - 0.5 * cs * cs;
  const double gd = cs * ss * sd;
  out.phi = std::atan2(ss, cs / std::numbers::sqrt2);
  out.phi_dot = sd / (std::numbers::sqrt2 * g);
  out.phi_ddot = sdd / (std::numbers::sqrt2 * g) - sd * gd / (std::numbers::sqrt2 * g * g);
  return out;
}

EnvelopeParams EnvelopeParams::make(double amplitude, double duration) {
  if (!(std::isfinite(amplitude) && amplitude > 0.0)) {
    throw DomainError(fmt::format("envelope amplitude must be positive, got {}", amplitude));
  }
  if (!(std::isfinite(duration) && duration > 0.0)) {
    throw DomainError(fmt::format("gate duration must be positive, got {}", duration));
  }
  return {amplitude, duration};
}

EnvelopeParams EnvelopeParams::defaults() {
  return make(mhz_to_rad_per_ns(kDefaultAmplitudeMhz), kDefaultDurationNs);
}

std::string_view to_string(PresetName name) {
  switch (name) {
    case PresetName::X_pi: return "X_pi";
    case PresetName::X_half: return "X_half";
    case PresetName::X_neg_half: return "X_neg_half";
    case PresetName::Y_pi: return "Y_pi";
    case PresetName::Y_half: return "Y_half";
    case PresetName::Y_neg_half: return "Y_neg_half";
    case PresetName::Z_pi: return "Z_pi";
    case PresetName::Z_half: return "Z_half";
    case PresetName::Hadamard: return "Hadamard";
    case PresetName::Identity: return "Identity";
  }
  return "?";
}

std::optional<PresetName> parse_preset_name(std::string_view text) {
  for (PresetName p : kAllPresets) {
    if (to_string(p) == text) return p;
  }
  if (text == "H") return PresetName::Hadamard;
  if (text == "I") return PresetName::Identity;
  return std::nullopt;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Reference: return "reference";
    case Provenance::CounterDiabatic: return "cd";
    case Provenance::CounterDiabaticDrag: return "cd_drag";
    case Provenance::Synthetic: return "synthetic";
  }
  return "?";
}

Mat2 target_unitary(PresetName name) {
  const double h = kHalfSqrt2;
  Mat2 u;
  switch (name) {
    case PresetName::X_pi: u << 0, -kI, -kI, 0; break;
    case PresetName::X_half: u << h, -kI * h, -kI * h, h; break;
    case PresetName::X_neg_half: u << h, kI * h, kI * h, h; break;
    case PresetName::Y_pi: u << 0, -1, 1, 0; break;
    case PresetName::Y_half: u << h, -h, h, h; break;
    case PresetName::Y_neg_half: u << h, h, -h, h; break;
    case PresetName::Z_pi: u << -kI, 0, 0, kI; break;
    case PresetName::Z_half: u << std::exp(-kI * (kPi / 4)), 0, 0, std::exp(kI * (kPi / 4)); break;
    case PresetName::Hadamard: u << h, h, h, -h; break;
    case PresetName::Identity: u = Mat2::Identity(); break;
  }
  return u;
}

GatePreset make_preset(PresetName name, const EnvelopeParams& envelope) {
  const double T = envelope.duration;
  const CosineRamp none{};
  const CosineRamp full{0.0, kPi / 2};
  const CosineRamp half{0.0, kPi / 4};
  const CosineRamp neg_half{0.0, -kPi / 4};
  const CosineRamp x_axis_phi{-kPi / 2, 0.0};
  const CosineRamp equator{kPi / 2, 0.0};

  auto polar = [&](CosineRamp th, CosineRamp ph, FieldForm form) {
    return GatePreset{name, AngleSchedule::polar(th, ph, T), envelope, form, target_unitary(name)};
  };

  switch (name) {
    case PresetName::X_pi: return polar(full, x_axis_phi, FieldForm::X);
    case PresetName::X_half: return polar(half, x_axis_phi, FieldForm::X);
    case PresetName::X_neg_half: return polar(neg_half, x_axis_phi, FieldForm::X);
    case PresetName::Y_pi: return polar(full, none, FieldForm::Y);
    case PresetName::Y_half: return polar(half, none, FieldForm::Y);
    case PresetName::Y_neg_half: return polar(neg_half, none, FieldForm::Y);
    case PresetName::Z_pi: return polar(equator, full, FieldForm::Z);
    case PresetName::Z_half: return polar(equator, half, FieldForm::Z);
    case PresetName::Hadamard:
      return GatePreset{name, AngleSchedule::tilted_equator(full, T), envelope, FieldForm::Hadamard,
                        target_unitary(name)};
    case PresetName::Identity: return polar(none, none, FieldForm::Identity);
  }
  throw DomainError("unknown preset");
}

ControlWaveform::ControlWaveform(double dt, std::vector<FieldVector> samples, double duration,
                                 Provenance provenance)
    : dt_(dt), samples_(std::move(samples)), duration_(duration), provenance_(provenance) {
  if (!(dt_ > 0.0)) throw ResolutionError(fmt::format("dt must be positive, got {}", dt_));
  const double covered = static_cast<double>(samples_.size()) * dt_;
  if (std::abs(covered - duration_) > 1e-9 * duration_) {
    throw ResolutionError(
        fmt::format("{} samples x {} ns does not cover {} ns", samples_.size(), dt_, duration_));
  }
}

ControlWaveform ControlWaveform::constant(const FieldVector& b, double duration,
                                          std::size_t steps) {
  if (steps == 0) throw ResolutionError("waveform needs at least one step");
  return ControlWaveform(duration / static_cast<double>(steps),
                         std::vector<FieldVector>(steps, b), duration, Provenance::Synthetic);
}

double omega_envelope(double t, const EnvelopeParams& env) {
  check_time(t, env.duration);
  return env.amplitude * std::sin(2.0 * kPi * t / env.duration);
}

double omega_envelope_rate(double t, const EnvelopeParams& env) {
  check_time(t, env.duration);
  const double w = 2.0 * kPi / env.duration;
  return env.amplitude * w * std::cos(w * t);
}

FieldVector reference_field(const GatePreset& preset, double t) {
  const double om = omega_envelope(t, preset.envelope);
  const AngleSample a = preset.schedule.at(t);
  switch (preset.form) {
    case FieldForm::X:
      return {0.0, -om * std::sin(a.theta), om * std::cos(a.theta)};
    case FieldForm::Y:
      return {om * std::sin(a.theta), 0.0, om * std::cos(a.theta)};
    case FieldForm::Z:
      return {om * std::cos(a.phi), om * std::sin(a.phi), 0.0};
    case FieldForm::Hadamard: {
      const double s = preset.schedule.drive_phase().value(t, preset.envelope.duration);
      return {kHalfSqrt2 * om * std::cos(s), om * std::sin(s), -kHalfSqrt2 * om * std::cos(s)};
    }
    case FieldForm::Identity:
      return {};
  }
  return {};
}

FieldVector reference_field_rate(const GatePreset& preset, double t) {
  const double om = omega_envelope(t, preset.envelope);
  const double omd = omega_envelope_rate(t, preset.envelope);
  const AngleSample a = preset.schedule.at(t);
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double sp = std::sin(a.phi), cp = std::cos(a.phi);
  switch (preset.form) {
    case FieldForm::X:
      return {0.0, -omd * st - om * ct * a.theta_dot, omd * ct - om * st * a.theta_dot};
    case FieldForm::Y:
      return {omd * st + om * ct * a.theta_dot, 0.0, omd * ct - om * st * a.theta_dot};
    case FieldForm::Z:
      return {omd * cp - om * sp * a.phi_dot, omd * sp + om * cp * a.phi_dot, 0.0};
    case FieldForm::Hadamard: {
      const CosineRamp& ramp = preset.schedule.drive_phase();
      const double T = preset.envelope.duration;
      const double s = ramp.value(t, T);
      const double sd = ramp.rate(t, T);
      const double xc = omd * std::cos(s) - om * std::sin(s) * sd;
      return {kHalfSqrt2 * xc, omd * std::sin(s) + om * std::cos(s) * sd, -kHalfSqrt2 * xc};
    }
    case FieldForm::Identity:
      return {};
  }
  return {};
}

FieldVector counter_diabatic_components(const AngleSchedule& schedule, double t) {
  check_time(t, schedule.duration());
  const AngleSample a = schedule.at(t);
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double sp = std::sin(a.phi), cp = std::cos(a.phi);
  return {-a.theta_dot * sp - a.phi_dot * st * ct * cp,
          a.theta_dot * cp - a.phi_dot * st * ct * sp,
          a.phi_dot * st * st};
}

FieldVector counter_diabatic_rate(const AngleSchedule& schedule, double t) {
  check_time(t, schedule.duration());
  const AngleSample a = schedule.at(t);
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double sp = std::sin(a.phi), cp = std::cos(a.phi);
  const double sc = st * ct;
  const double sc_dot = a.theta_dot * std::cos(2.0 * a.theta);
  const double td = a.theta_dot, pd = a.phi_dot;
  return {-a.theta_ddot * sp - td * pd * cp - a.phi_ddot * sc * cp - pd * sc_dot * cp +
              pd * pd * sc * sp,
          a.theta_ddot * cp - td * pd * sp - a.phi_ddot * sc * sp - pd * sc_dot * sp -
              pd * pd * sc * cp,
          a.phi_ddot * st * st + pd * td * std::sin(2.0 * a.theta)};
}

FieldVector counter_diabatic_cross(const FieldVector& b0, const FieldVector& b0_dot) {
  const double n2 = b0.dot(b0);
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw SingularFieldError("cross-product form of B_cd is singular where the field vanishes");
  }
  return (1.0 / n2) * b0.cross(b0_dot);
}

FieldVector drag_correction(const FieldVector& b, const FieldVector& b_dot, double delta2) {
  if (delta2 == 0.0 || !std::isfinite(delta2)) {
    throw InvalidAnharmonicityError("DRAG correction needs a finite nonzero anharmonicity");
  }
  const double k = 1.0 / (2.0 * delta2);
  return {k * (b_dot.by - b.bz * b.bx), -k * (b_dot.bx + b.bz * b.by), 0.0};
}

FieldBreakdown field_at(const GatePreset& preset, const Corrections& corrections, double t,
                        double delta2) {
  if (corrections.drag && !corrections.counter_diabatic) {
    throw FlagError("DRAG is computed from B0 + B_cd and requires the counter-diabatic flag");
  }
  FieldBreakdown out;
  out.reference = reference_field(preset, t);
  FieldVector b = out.reference;
  if (corrections.counter_diabatic) {
    out.counter_diabatic = counter_diabatic_components(preset.schedule, t);
    b += out.counter_diabatic;
  }
  if (corrections.drag) {
    const FieldVector b_dot =
        reference_field_rate(preset, t) + counter_diabatic_rate(preset.schedule, t);
    out.drag = drag_correction(b, b_dot, delta2);
    b += out.drag;
  }
  out.total = b;
  return out;
}

double default_dt(double duration) { return duration / static_cast<double>(kDefaultSteps); }

ControlWaveform synthesize_waveform(const GatePreset& preset, const Corrections& corrections,
                                    double dt, double delta2) {
  if (corrections.drag && !corrections.counter_diabatic) {
    throw FlagError("DRAG is computed from B0 + B_cd and requires the counter-diabatic flag");
  }
  const double T = preset.envelope.duration;
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ResolutionError(fmt::format("dt must be positive, got {}", dt));
  }
  const double ratio = T / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (steps < kMinSteps) {
    throw ResolutionError(
        fmt::format("{} steps over {} ns is below the minimum of {}", steps, T, kMinSteps));
  }
  if (std::abs(static_cast<double>(steps) * dt - T) > 1e-9 * T) {
    throw ResolutionError(fmt::format("dt = {} ns does not divide T = {} ns", dt, T));
  }
  const double h = T / static_cast<double>(steps);

  std::vector<FieldVector> samples;
  samples.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * h;
    samples.push_back(field_at(preset, corrections, t, delta2).total);
  }

  Provenance prov = Provenance::Reference;
  if (corrections.drag) {
    prov = Provenance::CounterDiabaticDrag;
  } else if (corrections.counter_diabatic) {
    prov = Provenance::CounterDiabatic;
  }
  return ControlWaveform(h, std::move(samples), T, prov);
}

}  // namespace sta
