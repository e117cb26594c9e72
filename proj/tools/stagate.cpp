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

// stagate: waveform synthesis, gate simulation, tomography and RB runs.
//
//   stagate synth  --config x_pi.json --out out/x_pi
//   stagate rb     --set rb_mode=abstract --set k=200 --seed 7
//
// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sta/cli_io.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw sta::IoError(fmt::format("cannot read config {}", path));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int execute(sta::cli::Command command, const std::string& config_path,
            const std::vector<std::string>& sets, const std::string& out,
            const std::optional<std::uint64_t>& seed) {
  using namespace sta::cli;
  const std::string text = config_path.empty() ? "{}" : read_file(config_path);

  std::vector<Override> overrides{{"command", fmt::format("\"{}\"", to_string(command))}};
  for (const std::string& s : sets) overrides.push_back(parse_override(s));
  if (!out.empty()) overrides.push_back({"out", nlohmann::json(out).dump()});
  if (seed) overrides.push_back({"seed", std::to_string(*seed)});

  const ExperimentConfig config = parse_config(text, overrides);
  const RunResult result = run(config, {threads_from_env()});
  for (const FileRecord& f : result.files) fmt::print("{}  {}\n", f.sha256, f.path);
  fmt::print("{}\n", result.results.dump());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STA gate synthesis, simulation and benchmarking"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sta::cli::kToolVersion));

  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  std::optional<std::uint64_t> seed;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"synth", "write the control waveform at each requested correction level"},
      {"evolve", "simulate the gate: propagator, fidelity, leakage, Bloch trajectory"},
      {"qpt", "process tomography of the simulated gate"},
      {"rb", "reference and interleaved randomized benchmarking"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--set", sets, "key=value override")->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto command = sta::cli::parse_command(app.get_subcommands().front()->get_name());
  try {
    return execute(*command, config_path, sets, out, seed);
  } catch (const sta::ConfigError& e) {
    std::cerr << fmt::format("config error ({}, key \"{}\"): {}\n",
                             sta::ConfigError::kind_name(e.kind()), e.key(), e.what());
    return 2;
  } catch (const sta::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const sta::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
