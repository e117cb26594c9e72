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

#include "sta/benchmarking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include <fmt/format.h>

namespace sta {

namespace {

Mat2 generator_unitary(Generator g) { return target_unitary(preset_for(g)); }

// rho -> p rho + (1 - p) Tr(rho) I/2 on the qubit.
Channel depolarizing(double p) {
  const MatX half_identity = vectorize(0.5 * MatX::Identity(2, 2));
  const MatX trace_row = vectorize(MatX::Identity(2, 2)).transpose();
  return Channel(p * MatX::Identity(4, 4) + (1.0 - p) * half_identity * trace_row,
                 LevelModel::TwoLevel);
}

Channel idle_channel(const PulseChannelParams& params) {
  const ControlWaveform idle = ControlWaveform::zero(params.gap_ns, kMinSteps);
  return lindblad_channel(idle, params.gate.model, params.gate.delta2, params.decoherence);
}

Channel pulse_channel(PresetName name, const PulseChannelParams& params) {
  const GatePreset preset = make_preset(name, params.envelope);
  Channel ch = sta_gate(preset, params.gate, params.decoherence);
  if (params.gap_ns > 0.0) ch = ch.then(idle_channel(params));
  return ch;
}

double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return sd / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

std::string_view to_string(Generator g) { return to_string(preset_for(g)); }

PresetName preset_for(Generator g) {
  switch (g) {
    case Generator::I: return PresetName::Identity;
    case Generator::X_pi: return PresetName::X_pi;
    case Generator::X_half: return PresetName::X_half;
    case Generator::X_neg_half: return PresetName::X_neg_half;
    case Generator::Y_pi: return PresetName::Y_pi;
    case Generator::Y_half: return PresetName::Y_half;
    case Generator::Y_neg_half: return PresetName::Y_neg_half;
  }
  return PresetName::Identity;
}

bool same_up_to_phase(const Mat2& u, const Mat2& v, double tol) {
  return std::abs(std::abs((u.adjoint() * v).trace()) - 2.0) <= tol;
}

CliffordTable::CliffordTable(std::vector<CliffordElement> elements,
                             std::array<std::array<int, kCliffordCount>, kCliffordCount> product,
                             std::array<int, kCliffordCount> inverse, int identity)
    : elements_(std::move(elements)), product_(product), inverse_(inverse), identity_(identity) {}

std::optional<int> CliffordTable::find(const Mat2& u) const {
  for (const CliffordElement& e : elements_) {
    if (same_up_to_phase(e.unitary, u)) return e.index;
  }
  return std::nullopt;
}

CliffordTable build_clifford_table() {
  std::vector<CliffordElement> elements;
  auto known = [&](const Mat2& u) {
    return std::any_of(elements.begin(), elements.end(),
                       [&](const CliffordElement& e) { return same_up_to_phase(e.unitary, u); });
  };

  std::vector<std::vector<Generator>> frontier{{}};
  for (int length = 1; length <= 3; ++length) {
    std::vector<std::vector<Generator>> next;
    for (const auto& word : frontier) {
      for (Generator g : kGenerators) {
        std::vector<Generator> w = word;
        w.push_back(g);
        next.push_back(w);
      }
    }
    for (const auto& word : next) {
      Mat2 u = Mat2::Identity();
      for (Generator g : word) u = generator_unitary(g) * u;
      if (!known(u)) {
        elements.push_back({static_cast<int>(elements.size()), u, word});
      }
    }
    frontier = std::move(next);
  }
  if (elements.size() != kCliffordCount) {
    throw ConstructionError(
        fmt::format("generator words produced {} distinct elements, expected 24", elements.size()));
  }

  auto lookup = [&](const Mat2& u) {
    int found = -1;
    for (const CliffordElement& e : elements) {
      if (same_up_to_phase(e.unitary, u)) {
        if (found >= 0) throw ConstructionError("Clifford elements are not distinct");
        found = e.index;
      }
    }
    if (found < 0) throw ConstructionError("Clifford product left the group");
    return found;
  };

  std::array<std::array<int, kCliffordCount>, kCliffordCount> product{};
  for (int a = 0; a < kCliffordCount; ++a) {
    for (int b = 0; b < kCliffordCount; ++b) {
      product[a][b] = lookup(elements[a].unitary * elements[b].unitary);
    }
  }
  const int identity = lookup(Mat2::Identity());
  std::array<int, kCliffordCount> inverse{};
  for (int a = 0; a < kCliffordCount; ++a) {
    inverse[a] = lookup(elements[a].unitary.adjoint());
    if (product[inverse[a]][a] != identity || product[a][inverse[a]] != identity) {
      throw ConstructionError("inverse table inconsistent with the product table");
    }
  }
  return CliffordTable(std::move(elements), product, inverse, identity);
}

RbSequence random_rb_sequence(int m, const CliffordTable& table, Rng& rng,
                              std::optional<int> interleaved) {
  if (m < 1) throw DomainError(fmt::format("sequence length must be >= 1, got {}", m));
  RbSequence seq;
  seq.cliffords.reserve(static_cast<std::size_t>(m));
  int acc = table.identity();
  for (int i = 0; i < m; ++i) {
    const int c = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(table.size())));
    seq.cliffords.push_back(c);
    acc = table.product(c, acc);
    if (interleaved) acc = table.product(*interleaved, acc);
  }
  seq.recovery = table.inverse(acc);
  return seq;
}

void RbConfig::validate() const {
  if (randomizations < 1) throw DomainError("randomizations per length must be >= 1");
  if (lengths.empty()) throw DomainError("sequence-length list is empty");
  if (lengths.front() < 1) throw DomainError("sequence lengths must be >= 1");
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    if (lengths[i] <= lengths[i - 1]) throw DomainError("sequence lengths must increase strictly");
  }
  if (mode == RbMode::Abstract) {
    for (double p : {abstract_noise.clifford_p, abstract_noise.gate_p}) {
      if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing parameter must lie in [0, 1]");
    }
  } else {
    pulse.decoherence.validate();
    if (pulse.gap_ns < 0.0) throw DomainError("gap between pulses must be >= 0");
  }
  measurement.validate();
}

RbChannels::RbChannels(const CliffordTable& table, const RbConfig& config)
    : model_(config.mode == RbMode::Abstract ? LevelModel::TwoLevel : config.pulse.gate.model) {
  if (config.mode == RbMode::Abstract) {
    const Channel noise = depolarizing(config.abstract_noise.clifford_p);
    for (const CliffordElement& e : table.elements()) {
      cliffords_.push_back(Channel::unitary(e.unitary).then(noise));
      recoveries_.push_back(Channel::unitary(e.unitary));
    }
    if (config.interleaved) set_interleaved(table, *config.interleaved, config);
    return;
  }

  std::map<Generator, Channel> generators;
  for (Generator g : kGenerators) generators.emplace(g, pulse_channel(preset_for(g), config.pulse));
  for (const CliffordElement& e : table.elements()) {
    Channel ch = Channel::identity(model_);
    for (Generator g : e.decomposition) ch = ch.then(generators.at(g));
    cliffords_.push_back(ch);
  }
  recoveries_ = cliffords_;
  if (config.interleaved) set_interleaved(table, *config.interleaved, config);
}

void RbChannels::set_interleaved(const CliffordTable& table, PresetName gate,
                                 const RbConfig& config) {
  const std::optional<int> index = table.find(target_unitary(gate));
  if (!index) {
    throw UnsupportedGateError(
        fmt::format("{} is not a Clifford; recovery would leave the group", to_string(gate)));
  }
  interleaved_index_ = index;
  if (config.mode == RbMode::Abstract) {
    interleaved_ =
        Channel::unitary(target_unitary(gate)).then(depolarizing(config.abstract_noise.gate_p));
  } else {
    interleaved_ = pulse_channel(gate, config.pulse);
  }
}

std::vector<RbPoint> run_rb_sequences(const CliffordTable& table, const RbChannels& channels,
                                      const RbConfig& config, bool interleave) {
  config.validate();
  if (interleave && !channels.interleaved()) {
    throw DomainError("interleaved RB requested without an interleaved gate");
  }
  const int d = dimension(channels.model());
  const std::size_t k = static_cast<std::size_t>(config.randomizations);
  const std::size_t tasks = config.lengths.size() * k;
  std::vector<double> survival(tasks, 0.0);

  // Stream per (kind, m, repetition): derive_seed(seed, {kind, m, rep}),
  // kind 0 for reference and 1 for interleaved sequences.
  auto run_task = [&](std::size_t task) {
    const std::size_t mi = task / k;
    const std::size_t rep = task % k;
    const int m = config.lengths[mi];
    Rng rng(derive_seed(config.seed, {interleave ? 1u : 0u, static_cast<std::uint64_t>(m), rep}));
    const RbSequence seq = random_rb_sequence(
        m, table, rng, interleave ? channels.interleaved_index() : std::nullopt);

    VecX state = VecX::Zero(d * d);
    state(0) = 1.0;
    for (int c : seq.cliffords) {
      state = channels.clifford(c).superop() * state;
      if (interleave) state = channels.interleaved()->superop() * state;
    }
    state = channels.recovery(seq.recovery).superop() * state;

    const double p0 = std::clamp(state(0).real(), 0.0, 1.0);
    const double q0 = config.measurement.read_zero_probability(p0);
    if (config.measurement.shots) {
      std::binomial_distribution<std::uint64_t> counts(*config.measurement.shots, q0);
      survival[task] =
          static_cast<double>(counts(rng)) / static_cast<double>(*config.measurement.shots);
    } else {
      survival[task] = q0;
    }
  };

  unsigned threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(tasks));
  if (threads == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < tasks; t += threads) run_task(t);
      });
    }
  }

  std::vector<RbPoint> out;
  for (std::size_t mi = 0; mi < config.lengths.size(); ++mi) {
    const std::vector<double> values(survival.begin() + static_cast<std::ptrdiff_t>(mi * k),
                                     survival.begin() + static_cast<std::ptrdiff_t>((mi + 1) * k));
    const double mean = sample_mean(values);
    out.push_back({config.lengths[mi], mean, standard_error(values, mean)});
  }
  return out;
}

std::vector<RbPoint> run_rb(const RbConfig& config) {
  config.validate();
  const CliffordTable table = build_clifford_table();
  RbConfig reference = config;
  reference.interleaved.reset();
  const RbChannels channels(table, reference);
  return run_rb_sequences(table, channels, reference, false);
}

std::vector<RbPoint> run_interleaved_rb(const RbConfig& config) {
  config.validate();
  if (!config.interleaved) throw DomainError("interleaved RB needs a gate");
  const CliffordTable table = build_clifford_table();
  const RbChannels channels(table, config);
  return run_rb_sequences(table, channels, config, true);
}

RbFit fit_decay(const std::vector<RbPoint>& points) {
  std::vector<RbPoint> data = points;
  std::sort(data.begin(), data.end(), [](const RbPoint& a, const RbPoint& b) { return a.m < b.m; });
  const auto distinct =
      std::unique(data.begin(), data.end(), [](const RbPoint& a, const RbPoint& b) {
        return a.m == b.m;
      }) - data.begin();
  if (distinct < 4) throw DomainError("decay fit needs at least 4 distinct sequence lengths");
  data = points;
  std::sort(data.begin(), data.end(), [](const RbPoint& a, const RbPoint& b) { return a.m < b.m; });

  const std::size_t n = data.size();
  RbFit fit;
  fit.a0 = data.front().fidelity - data.back().fidelity;
  fit.b0 = data.back().fidelity;
  fit.p = 1.0;

  double lo = data.front().fidelity, hi = lo;
  for (const RbPoint& pt : data) {
    lo = std::min(lo, pt.fidelity);
    hi = std::max(hi, pt.fidelity);
  }
  if (hi - lo < 1e-9) {
    throw DegenerateDecayError("sequence fidelity shows no decay; p is indeterminate", fit);
  }

  // Log-linear regression of (F - B0) / A0 against m for the initial p.
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (const RbPoint& pt : data) {
      const double y = (pt.fidelity - fit.b0) / fit.a0;
      if (y <= 0.0) continue;
      const double x = pt.m;
      const double ly = std::log(y);
      sx += x;
      sy += ly;
      sxx += x * x;
      sxy += x * ly;
      ++used;
    }
    double p0 = 0.99;
    if (used >= 2) {
      const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
      if (std::isfinite(slope)) p0 = std::exp(slope);
    }
    fit.p = std::clamp(p0, 1e-6, 1.0 - 1e-9);
  }

  Eigen::Vector3d x(fit.a0, fit.p, fit.b0);
  auto residuals = [&](const Eigen::Vector3d& par) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      r(static_cast<Eigen::Index>(i)) =
          par(0) * std::pow(par(1), data[i].m) + par(2) - data[i].fidelity;
    }
    return r;
  };
  auto jacobian = [&](const Eigen::Vector3d& par) {
    Eigen::MatrixXd j(static_cast<Eigen::Index>(n), 3);
    for (std::size_t i = 0; i < n; ++i) {
      const double m = data[i].m;
      const auto row = static_cast<Eigen::Index>(i);
      j(row, 0) = std::pow(par(1), m);
      j(row, 1) = par(0) * m * std::pow(par(1), m - 1.0);
      j(row, 2) = 1.0;
    }
    return j;
  };
  auto cost_of = [&](const Eigen::Vector3d& par) {
    if (!(par(1) > 0.0)) return std::numeric_limits<double>::infinity();
    return residuals(par).squaredNorm();
  };

  auto snapshot = [&](const Eigen::Vector3d& par, int iterations) {
    RbFit f;
    f.a0 = par(0);
    f.p = par(1);
    f.b0 = par(2);
    const double rss = cost_of(par);
    f.residual_norm = std::sqrt(rss);
    f.iterations = iterations;
    const Eigen::MatrixXd j = jacobian(par);
    const Eigen::Matrix3d jtj = j.transpose() * j;
    const double dof = static_cast<double>(n) - 3.0;
    if (dof > 0.0) {
      Eigen::FullPivLU<Eigen::Matrix3d> lu(jtj);
      if (lu.isInvertible()) f.covariance = (rss / dof) * lu.inverse();
    }
    return f;
  };

  double cost = cost_of(x);
  double lambda = 1e-3;
  bool converged = false;
  int iter = 0;
  for (; iter < 200 && !converged; ++iter) {
    const Eigen::MatrixXd j = jacobian(x);
    const Eigen::VectorXd r = residuals(x);
    const Eigen::Matrix3d a = j.transpose() * j;
    const Eigen::Vector3d g = j.transpose() * r;
    Eigen::Matrix3d damped = a;
    damped.diagonal() += lambda * a.diagonal().cwiseMax(1e-300);
    const Eigen::Vector3d step = damped.ldlt().solve(-g);
    if (!step.allFinite()) break;
    if (step.cwiseAbs().maxCoeff() < 1e-10) {
      const Eigen::Vector3d trial = x + step;
      if (cost_of(trial) <= cost) {
        x = trial;
        cost = cost_of(x);
      }
      converged = true;
      break;
    }
    const Eigen::Vector3d trial = x + step;
    const double trial_cost = cost_of(trial);
    if (trial_cost < cost) {
      x = trial;
      cost = trial_cost;
      lambda = std::max(lambda / 10.0, 1e-15);
    } else {
      lambda *= 10.0;
      if (lambda > 1e15) {
        converged = true;  // no descent direction left: stationary point
      }
    }
  }

  RbFit result = snapshot(x, iter);
  if (!converged) throw FitError("decay fit did not converge in 200 iterations", result);
  if (!(result.p > 0.0 && result.p <= 1.0 + 1e-12)) {
    throw FitError(fmt::format("fitted p = {} outside (0, 1]", result.p), result);
  }
  return result;
}

double average_error(double p, int n_qubits) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError(fmt::format("p = {} outside (0, 1]", p));
  if (n_qubits < 1) throw DomainError("qubit count must be >= 1");
  const double d = std::ldexp(1.0, n_qubits);
  return (d - 1.0) * (1.0 - p) / d;
}

GateFidelity interleaved_gate_fidelity(double p_ref, double p_interleaved, int n_qubits) {
  if (p_ref == 0.0) throw DomainError("reference decay parameter is zero");
  if (n_qubits < 1) throw DomainError("qubit count must be >= 1");
  const double d = std::ldexp(1.0, n_qubits);
  GateFidelity out;
  out.value = 1.0 - (d - 1.0) / d * (1.0 - p_interleaved / p_ref);
  out.warning = p_interleaved > p_ref;
  return out;
}

GateFidelity interleaved_gate_fidelity(const RbFit& reference, const RbFit& interleaved,
                                       int n_qubits) {
  GateFidelity out = interleaved_gate_fidelity(reference.p, interleaved.p, n_qubits);
  const double d = std::ldexp(1.0, n_qubits);
  const double ratio = interleaved.p / reference.p;
  const double rel = std::hypot(interleaved.p_stderr() / interleaved.p,
                                reference.p_stderr() / reference.p);
  out.std_error = (d - 1.0) / d * ratio * rel;
  return out;
}

}  // namespace sta
