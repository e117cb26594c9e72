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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sta/benchmarking.hpp"
#include "sta/dynamics.hpp"
#include "sta/pulse_synthesis.hpp"
#include "sta/tomography.hpp"

namespace sta::cli {

inline constexpr std::string_view kToolName = "stagate";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Command { Synth, Evolve, Qpt, Rb };
std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view text);

// Flat key set; key names match the JSON document and the --set flags.
struct ExperimentConfig {
  Command command = Command::Synth;
  PresetName preset = PresetName::X_pi;
  bool cd = true;
  bool drag = true;
  LevelModel model = LevelModel::ThreeLevel;
  double A_mhz = kDefaultAmplitudeMhz;
  double T_ns = kDefaultDurationNs;
  double delta2_mhz = kDefaultAnharmonicityMhz;
  std::uint64_t steps = kDefaultSteps;

  bool decoherence = true;
  // null switches the process off.
  std::optional<double> T1_ns = 20000.0;
  std::optional<double> Tphi_ns = 38000.0;
  DephasingConvention dephasing_convention = DephasingConvention::Pure;

  // Tomography readout. null shots = exact expectation values.
  std::optional<std::uint64_t> shots = kDefaultShots;
  double readout_f0 = kDefaultReadoutFidelity0;
  double readout_f1 = kDefaultReadoutFidelity1;
  bool mitigate_readout = true;

  // Randomized benchmarking.
  RbMode rb_mode = RbMode::Pulse;
  int k = 50;
  std::vector<int> m_list{1, 3, 6, 10, 20, 40, 70, 100, 150, 200, 300};
  // null = exact survival probabilities; otherwise sampled with readout confusion.
  std::optional<std::uint64_t> rb_shots;
  double depol_p = 0.998;
  double depol_p_gate = 1.0;
  // Gates for interleaved RB; filled with [preset] when the key is absent.
  std::vector<PresetName> interleave;
  double gap_ns = 0.0;

  std::uint64_t seed = 1;
  std::string out = "out";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// One "key=value" override. The value is read as JSON when it parses and as
// a bare string otherwise.
struct Override {
  std::string key;
  std::string value;
};
Override parse_override(std::string_view assignment);

// Throws ConfigError (syntax, unknown key, type, constraint).
ExperimentConfig parse_config(std::string_view text, const std::vector<Override>& overrides = {});
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
std::string serialize_config(const ExperimentConfig& config);

EnvelopeParams envelope_of(const ExperimentConfig& config);
GateSettings gate_settings_of(const ExperimentConfig& config);
DecoherenceParams decoherence_of(const ExperimentConfig& config);
MeasurementModel measurement_of(const ExperimentConfig& config);
RbConfig rb_config_of(const ExperimentConfig& config, unsigned threads);

// Fixed-format numbers: 12 significant digits for CSV cells.
std::string csv_number(double x);
std::string sha256_hex(std::string_view bytes);
// ISO 8601 UTC; SOURCE_DATE_EPOCH overrides the clock.
std::string run_timestamp();

struct FileRecord {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

// Single writer for one run's output directory; every write is recorded.
class OutputDir {
 public:
  // Creates the directory. Throws IoError.
  explicit OutputDir(std::filesystem::path root);

  void write(const std::string& name, const std::string& content);
  const std::filesystem::path& root() const { return root_; }
  const std::vector<FileRecord>& files() const { return files_; }

 private:
  std::filesystem::path root_;
  std::vector<FileRecord> files_;
};

struct RunOptions {
  // Worker threads for RB; 0 = hardware concurrency.
  unsigned threads = 1;
};

struct RunResult {
  std::vector<FileRecord> files;
  // Headline numbers, also echoed into the manifest.
  nlohmann::json results;
};

RunResult cmd_synth(const ExperimentConfig& config, OutputDir& out);
RunResult cmd_evolve(const ExperimentConfig& config, OutputDir& out);
RunResult cmd_qpt(const ExperimentConfig& config, OutputDir& out);
RunResult cmd_rb(const ExperimentConfig& config, OutputDir& out, const RunOptions& options);

// Dispatches on config.command, then writes manifest.json (not listed in
// itself). Timestamps come from SOURCE_DATE_EPOCH when it is set.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

// Thread count from STA_THREADS; 1 when unset or invalid.
unsigned threads_from_env();

}  // namespace sta::cli
