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

#include <fstream>

#include <fmt/format.h>

#include "sta/cli_io.hpp"

namespace sta::cli {

using nlohmann::json;

namespace {

json real_part(const MatX& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).real());
    rows.push_back(row);
  }
  return rows;
}

json imag_part(const MatX& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).imag());
    rows.push_back(row);
  }
  return rows;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json corrections_json(const Corrections& c) {
  return {{"counter_diabatic", c.counter_diabatic}, {"drag", c.drag}};
}

std::string preset_tag(PresetName p) { return std::string(to_string(p)); }

RunResult collect(const OutputDir& out, json results) { return {out.files(), std::move(results)}; }

std::string rb_rows(const std::vector<RbPoint>& points, const std::string& kind) {
  std::string csv;
  for (const RbPoint& pt : points) {
    csv += fmt::format("{},{},{},{}\n", pt.m, csv_number(pt.fidelity), csv_number(pt.std_error),
                       kind);
  }
  return csv;
}

json fit_json(const RbFit& fit) {
  return {{"A0", fit.a0},
          {"B0", fit.b0},
          {"p", fit.p},
          {"p_stderr", fit.p_stderr()},
          {"residual_norm", fit.residual_norm},
          {"iterations", fit.iterations}};
}

}  // namespace

RunResult cmd_synth(const ExperimentConfig& config, OutputDir& out) {
  const GatePreset preset = make_preset(config.preset, envelope_of(config));
  const GateSettings settings = gate_settings_of(config);
  const double dt = config.T_ns / static_cast<double>(config.steps);

  std::vector<Corrections> levels{{false, false}};
  if (config.cd) levels.push_back({true, false});
  if (config.drag) levels.push_back({true, true});

  json written = json::array();
  for (const Corrections& corr : levels) {
    const ControlWaveform w = synthesize_waveform(preset, corr, dt, settings.delta2);
    const std::string stem =
        fmt::format("waveform_{}_{}", preset_tag(config.preset), to_string(w.provenance()));

    std::string csv = "t_ns,bx_mhz,by_mhz,bz_mhz\n";
    for (std::size_t k = 0; k < w.size(); ++k) {
      const FieldVector& b = w[k];
      csv += fmt::format("{},{},{},{}\n", csv_number(w.midpoint(k)),
                         csv_number(rad_per_ns_to_mhz(b.bx)), csv_number(rad_per_ns_to_mhz(b.by)),
                         csv_number(rad_per_ns_to_mhz(b.bz)));
    }
    out.write(stem + ".csv", csv);

    const json sidecar{{"preset", preset_tag(config.preset)},
                       {"provenance", std::string(to_string(w.provenance()))},
                       {"corrections", corrections_json(corr)},
                       {"A_mhz", config.A_mhz},
                       {"T_ns", config.T_ns},
                       {"dt_ns", w.dt()},
                       {"steps", w.size()},
                       {"delta2_mhz", config.delta2_mhz},
                       {"columns", {"t_ns", "bx_mhz", "by_mhz", "bz_mhz"}},
                       {"time_points", "sample midpoints (k + 1/2) dt"}};
    out.write(stem + ".json", dump(sidecar));
    written.push_back(stem);
  }
  return collect(out, {{"waveforms", written}, {"rows", config.steps}});
}

RunResult cmd_evolve(const ExperimentConfig& config, OutputDir& out) {
  const GatePreset preset = make_preset(config.preset, envelope_of(config));
  const GateSettings settings = gate_settings_of(config);
  const ControlWaveform w = gate_waveform(preset, settings);
  const Propagator u = evolve_unitary(w, settings.model, settings.delta2);

  const Mat2 target = target_unitary(config.preset);
  const double fidelity = unitary_gate_fidelity(target, u.qubit_block());
  const json leak =
      settings.model == LevelModel::ThreeLevel ? json(leakage(u)) : json(nullptr);

  const json doc{{"preset", preset_tag(config.preset)},
                 {"model", settings.model == LevelModel::TwoLevel ? "two_level" : "three_level"},
                 {"corrections", corrections_json(settings.corrections)},
                 {"steps", w.size()},
                 {"dt_ns", w.dt()},
                 {"re", real_part(u.matrix)},
                 {"im", imag_part(u.matrix)},
                 {"target_re", real_part(target)},
                 {"target_im", imag_part(target)},
                 {"gate_fidelity", fidelity},
                 {"leakage", leak}};
  out.write(fmt::format("propagator_{}.json", preset_tag(config.preset)), dump(doc));

  VecX psi0 = VecX::Zero(dimension(settings.model));
  psi0(0) = 1.0;
  const std::vector<VecX> states =
      evolve_state_trajectory(w, settings.model, settings.delta2, psi0);
  std::string csv = "t_ns,rx,ry,rz\n";
  for (std::size_t k = 0; k < states.size(); ++k) {
    const Complex a = states[k](0);
    const Complex b = states[k](1);
    const Complex coh = std::conj(a) * b;
    csv += fmt::format("{},{},{},{}\n", csv_number(static_cast<double>(k) * w.dt()),
                       csv_number(2.0 * coh.real()), csv_number(2.0 * coh.imag()),
                       csv_number(std::norm(a) - std::norm(b)));
  }
  out.write(fmt::format("trajectory_{}.csv", preset_tag(config.preset)), csv);

  return collect(out, {{"gate_fidelity", fidelity}, {"leakage", leak}});
}

RunResult cmd_qpt(const ExperimentConfig& config, OutputDir& out) {
  const GatePreset preset = make_preset(config.preset, envelope_of(config));
  const GateSettings settings = gate_settings_of(config);
  const DecoherenceParams dec = decoherence_of(config);
  const MeasurementModel mm = measurement_of(config);

  const Channel channel = dec.closed() ? Channel::unitary(sta_gate(preset, settings).matrix)
                                       : sta_gate(preset, settings, dec);
  const QptDataset data = run_qpt(qubit_channel(channel), mm);
  const ChiMatrix chi = reconstruct_chi(data);
  const ProcessFidelity fp = process_fidelity(chi, ideal_chi(target_unitary(config.preset)));

  static constexpr std::array<const char*, 4> kBasis{"I", "X", "Y", "Z"};
  const json measurement{{"shots", mm.shots ? json(*mm.shots) : json(nullptr)},
                         {"readout_f0", mm.readout_fidelity_0},
                         {"readout_f1", mm.readout_fidelity_1},
                         {"mitigate_readout", mm.mitigate_readout},
                         {"seed", mm.rng_seed}};
  const json doc{{"preset", preset_tag(config.preset)},
                 {"basis", kBasis},
                 {"re", real_part(chi.values)},
                 {"im", imag_part(chi.values)},
                 {"process_fidelity", fp.value},
                 {"process_fidelity_raw", fp.raw},
                 {"clamped", fp.clamped},
                 {"measurement", measurement}};
  out.write(fmt::format("chi_{}.json", preset_tag(config.preset)), dump(doc));

  std::string csv = "row,col,re,im\n";
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      csv += fmt::format("{},{},{},{}\n", kBasis[i], kBasis[j], csv_number(chi.values(i, j).real()),
                         csv_number(chi.values(i, j).imag()));
    }
  }
  out.write(fmt::format("chi_{}.csv", preset_tag(config.preset)), csv);

  return collect(out, {{"process_fidelity", fp.value}, {"clamped", fp.clamped}});
}

RunResult cmd_rb(const ExperimentConfig& config, OutputDir& out, const RunOptions& options) {
  const CliffordTable table = build_clifford_table();
  RbConfig rb = rb_config_of(config, options.threads);
  RbChannels channels(table, rb);
  const json echo = config_to_json(config);

  std::string csv = "m,f_seq,stderr,kind\n";
  const std::vector<RbPoint> reference = run_rb_sequences(table, channels, rb, false);
  csv += rb_rows(reference, "reference");
  const RbFit ref_fit = fit_decay(reference);
  const double r = average_error(ref_fit.p, 1);

  json ref_doc = fit_json(ref_fit);
  ref_doc["kind"] = "reference";
  ref_doc["r"] = r;
  ref_doc["clifford_fidelity"] = 1.0 - r;
  ref_doc["clifford_fidelity_stderr"] = 0.5 * ref_fit.p_stderr();
  ref_doc["seed"] = config.seed;
  ref_doc["config"] = echo;

  std::string summary = "kind,p,p_stderr,fidelity,fidelity_stderr,warning\n";
  summary += fmt::format("reference,{},{},{},{},0\n", csv_number(ref_fit.p),
                         csv_number(ref_fit.p_stderr()), csv_number(1.0 - r),
                         csv_number(0.5 * ref_fit.p_stderr()));
  json results{{"p", ref_fit.p}, {"clifford_fidelity", 1.0 - r}, {"gates", json::object()}};

  std::vector<std::pair<std::string, json>> interleaved_docs;
  for (PresetName gate : config.interleave) {
    rb.interleaved = gate;
    channels.set_interleaved(table, gate, rb);
    const std::vector<RbPoint> points = run_rb_sequences(table, channels, rb, true);
    const std::string kind = "interleaved:" + preset_tag(gate);
    csv += rb_rows(points, kind);
    const RbFit fit = fit_decay(points);
    const GateFidelity fg = interleaved_gate_fidelity(ref_fit, fit, 1);

    json doc = fit_json(fit);
    doc["kind"] = kind;
    doc["gate"] = preset_tag(gate);
    doc["F_g"] = fg.value;
    doc["F_g_stderr"] = fg.std_error;
    doc["warning"] = fg.warning;
    doc["reference_p"] = ref_fit.p;
    doc["seed"] = config.seed;
    doc["config"] = echo;
    interleaved_docs.emplace_back(fmt::format("rb_fit_interleaved_{}.json", preset_tag(gate)), doc);

    summary += fmt::format("{},{},{},{},{},{}\n", kind, csv_number(fit.p),
                           csv_number(fit.p_stderr()), csv_number(fg.value),
                           csv_number(fg.std_error), fg.warning ? 1 : 0);
    results["gates"][preset_tag(gate)] = {{"F_g", fg.value}, {"F_g_stderr", fg.std_error},
                                          {"warning", fg.warning}};
  }

  out.write("rb_fseq.csv", csv);
  out.write("rb_fit_reference.json", dump(ref_doc));
  for (const auto& [name, doc] : interleaved_docs) out.write(name, dump(doc));
  out.write("rb_summary.csv", summary);
  return collect(out, results);
}

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
  const std::string started = run_timestamp();
  OutputDir out(config.out);
  RunResult result;
  switch (config.command) {
    case Command::Synth: result = cmd_synth(config, out); break;
    case Command::Evolve: result = cmd_evolve(config, out); break;
    case Command::Qpt: result = cmd_qpt(config, out); break;
    case Command::Rb: result = cmd_rb(config, out, options); break;
  }

  json files = json::array();
  for (const FileRecord& f : result.files) {
    files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  const json manifest{{"tool", kToolName},
                      {"version", kToolVersion},
                      {"command", to_string(config.command)},
                      {"seed", config.seed},
                      {"config", config_to_json(config)},
                      {"started_at", started},
                      {"finished_at", run_timestamp()},
                      {"files", files},
                      {"results", result.results}};
  const std::filesystem::path path = std::filesystem::path(config.out) / "manifest.json";
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  const std::string text = dump(manifest);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw IoError(fmt::format("write to {} failed", path.string()));
  return result;
}

}  // namespace sta::cli
