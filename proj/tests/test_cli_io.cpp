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

#include "sta/cli_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "sta/errors.hpp"

namespace sta::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "stagate_tests" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string* header = nullptr) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

ExperimentConfig config(const std::string& text, const fs::path& out) {
  return parse_config(text, {{"out", json(out.string()).dump()}});
}

ConfigError::Kind error_kind(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << text;
  return ConfigError::Kind::Syntax;
}

TEST(Config, Defaults) {
  const ExperimentConfig c = parse_config(R"({"command":"synth","preset":"X_pi"})");
  EXPECT_EQ(c.command, Command::Synth);
  EXPECT_EQ(c.preset, PresetName::X_pi);
  EXPECT_EQ(c.A_mhz, 20.0);
  EXPECT_EQ(c.T_ns, 30.0);
  EXPECT_EQ(c.delta2_mhz, -253.0);
  EXPECT_EQ(c.T1_ns, 20000.0);
  EXPECT_EQ(c.Tphi_ns, 38000.0);
  EXPECT_EQ(c.readout_f0, 0.998);
  EXPECT_EQ(c.readout_f1, 0.951);
  EXPECT_EQ(c.k, 50);
  EXPECT_EQ(c.steps, 3000u);
  EXPECT_EQ(c.interleave, std::vector<PresetName>{PresetName::X_pi});
}

TEST(Config, RbK) {
  const ExperimentConfig c = parse_config(R"({"command":"rb","preset":"X_pi","k":50})");
  EXPECT_EQ(c.command, Command::Rb);
  EXPECT_EQ(rb_config_of(c, 1).randomizations, 50);
}

TEST(Config, ConstraintNamesKey) {
  try {
    parse_config(R"({"command":"synth","preset":"X_pi","T_ns":-3})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.kind(), ConfigError::Kind::Constraint);
    EXPECT_EQ(e.key(), "T_ns");
    EXPECT_NE(std::string(e.what()).find("T_ns"), std::string::npos);
  }
}

TEST(Config, DistinctErrorKinds) {
  EXPECT_EQ(error_kind(R"({"command":"synth",)"), ConfigError::Kind::Syntax);
  EXPECT_EQ(error_kind("[1,2]"), ConfigError::Kind::Syntax);
  EXPECT_EQ(error_kind(R"({"command":"synth","bogus":1})"), ConfigError::Kind::UnknownKey);
  EXPECT_EQ(error_kind(R"({"command":"synth","T_ns":"thirty"})"), ConfigError::Kind::Type);
  EXPECT_EQ(error_kind(R"({"command":"synth","cd":1})"), ConfigError::Kind::Type);
  EXPECT_EQ(error_kind(R"({"command":"synth","preset":"T"})"), ConfigError::Kind::Constraint);
  EXPECT_EQ(error_kind(R"({"command":"fly"})"), ConfigError::Kind::Constraint);
  EXPECT_EQ(error_kind(R"({"preset":"X_pi"})"), ConfigError::Kind::Constraint);
  EXPECT_EQ(error_kind(R"({"command":"synth","cd":false})"), ConfigError::Kind::Constraint);
  EXPECT_EQ(error_kind(R"({"command":"rb","m_list":[1,2,2,3]})"), ConfigError::Kind::Constraint);
  EXPECT_EQ(error_kind(R"({"command":"qpt","shots":0})"), ConfigError::Kind::Constraint);
  EXPECT_EQ(error_kind(R"({"command":"qpt","readout_f1":0.3})"), ConfigError::Kind::Constraint);
  EXPECT_EQ(error_kind(R"({"command":"qpt","seed":-1})"), ConfigError::Kind::Constraint);
  EXPECT_EQ(error_kind(R"({"command":"qpt","steps":50})"), ConfigError::Kind::Constraint);
}

TEST(Config, Overrides) {
  const ExperimentConfig c = parse_config(
      R"({"command":"synth"})",
      {parse_override("preset=Hadamard"), parse_override("T_ns=40"),
       parse_override("shots=null"), parse_override("interleave=[\"X_pi\",\"Z_half\"]"),
       parse_override("out=some/dir")});
  EXPECT_EQ(c.preset, PresetName::Hadamard);
  EXPECT_EQ(c.T_ns, 40.0);
  EXPECT_FALSE(c.shots.has_value());
  EXPECT_EQ(c.interleave, (std::vector<PresetName>{PresetName::X_pi, PresetName::Z_half}));
  EXPECT_EQ(c.out, "some/dir");
  EXPECT_THROW(parse_override("novalue"), ConfigError);
  EXPECT_THROW(parse_config("{}", {{"nope", "1"}}), ConfigError);
}

TEST(Config, RoundTrip) {
  for (const char* text :
       {R"({"command":"synth"})", R"({"command":"evolve","model":"two_level","drag":false})",
        R"({"command":"qpt","shots":null,"T1_ns":null,"dephasing_convention":"from_t2"})",
        R"({"command":"rb","rb_mode":"abstract","m_list":[1,2,4,8,16],"seed":18446744073709551615,
            "interleave":[],"rb_shots":100,"depol_p":0.9871234567890123})"}) {
    const ExperimentConfig c = parse_config(text);
    EXPECT_EQ(parse_config(serialize_config(c)), c) << text;
  }
}

TEST(Config, DerivedSettings) {
  const ExperimentConfig c = parse_config(
      R"({"command":"qpt","dephasing_convention":"from_t2","model":"two_level","seed":9})");
  const DecoherenceParams d = decoherence_of(c);
  EXPECT_NEAR(1.0 / *d.tphi_ns, 1.0 / 38000 - 1.0 / 40000, 1e-18);
  EXPECT_EQ(gate_settings_of(c).model, LevelModel::TwoLevel);
  EXPECT_NEAR(gate_settings_of(c).delta2, mhz_to_rad_per_ns(-253.0), 1e-15);
  EXPECT_EQ(measurement_of(c).rng_seed, 9u);
  ExperimentConfig closed = c;
  closed.decoherence = false;
  EXPECT_TRUE(decoherence_of(closed).closed());
}

TEST(Format, NumbersAndHashes) {
  EXPECT_EQ(csv_number(0.1), "0.1");
  EXPECT_EQ(csv_number(-0.0), "0");
  EXPECT_EQ(csv_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Output, WritesAndRecords) {
  const fs::path dir = scratch("output");
  OutputDir out(dir);
  out.write("a.txt", "hello\n");
  ASSERT_EQ(out.files().size(), 1u);
  EXPECT_EQ(slurp(dir / "a.txt"), "hello\n");
  EXPECT_EQ(out.files()[0].sha256, sha256_hex("hello\n"));
  EXPECT_EQ(out.files()[0].bytes, 6u);
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(OutputDir(dir / "file" / "sub"), IoError);
}

TEST(Synth, XPiWaveforms) {
  const fs::path dir = scratch("synth");
  run(config(R"({"command":"synth","preset":"X_pi"})", dir));
  std::string header;
  const auto ref = read_csv(dir / "waveform_X_pi_reference.csv", &header);
  EXPECT_EQ(header, "t_ns,bx_mhz,by_mhz,bz_mhz");
  ASSERT_EQ(ref.size(), 3000u);
  for (const auto& row : ref) EXPECT_EQ(row[1], 0.0);
  const auto cd = read_csv(dir / "waveform_X_pi_cd.csv");
  // Counter-diabatic x-component is the theta-dot bump, peaking at T/2.
  const double peak = rad_per_ns_to_mhz(kPi * kPi / 60.0);
  double top = 0.0;
  for (const auto& row : cd) top = std::max(top, row[1]);
  EXPECT_NEAR(top, peak, 1e-6 * peak);
  const json side = json::parse(slurp(dir / "waveform_X_pi_cd_drag.json"));
  EXPECT_EQ(side["preset"], "X_pi");
  EXPECT_EQ(side["corrections"]["drag"], true);
  EXPECT_EQ(side["dt_ns"], 0.01);
  EXPECT_EQ(side["delta2_mhz"], -253.0);
}

TEST(Synth, ByteIdenticalRerunAndManifest) {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  const RunResult ra = run(config(R"({"command":"synth","preset":"Hadamard"})", a));
  run(config(R"({"command":"synth","preset":"Hadamard"})", b));
  const json manifest = json::parse(slurp(a / "manifest.json"));
  ASSERT_EQ(manifest["files"].size(), ra.files.size());
  for (const json& f : manifest["files"]) {
    const std::string name = f["path"];
    const std::string bytes = slurp(a / name);
    EXPECT_EQ(f["sha256"], sha256_hex(bytes)) << name;
    EXPECT_EQ(bytes, slurp(b / name)) << name;
  }
  std::size_t on_disk = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().filename() != "manifest.json") ++on_disk;
  }
  EXPECT_EQ(on_disk, manifest["files"].size());
  EXPECT_EQ(manifest["config"], config_to_json(config(R"({"command":"synth","preset":"Hadamard"})", a)));
}

TEST(Evolve, XPiTrajectory) {
  const fs::path dir = scratch("evolve");
  const RunResult r = run(
      config(R"({"command":"evolve","preset":"X_pi","model":"two_level","drag":false})", dir));
  const auto rows = read_csv(dir / "trajectory_X_pi.csv");
  ASSERT_EQ(rows.size(), 3001u);
  EXPECT_EQ(rows.front()[1], 0.0);
  EXPECT_EQ(rows.front()[3], 1.0);
  EXPECT_NEAR(rows.back()[3], -1.0, 1e-3);
  EXPECT_NEAR(rows.back()[2], 0.0, 1e-3);
  for (const auto& row : rows) EXPECT_LE(std::abs(row[1]), 1e-3);
  EXPECT_GE(r.results["gate_fidelity"].get<double>(), 1 - 1e-6);
  EXPECT_TRUE(r.results["leakage"].is_null());
  const json prop = json::parse(slurp(dir / "propagator_X_pi.json"));
  EXPECT_NEAR(prop["im"][0][1].get<double>(), -1.0, 1e-6);
}

TEST(Evolve, IdentityStaysAtNorthPole) {
  const fs::path dir = scratch("evolve_id");
  run(config(R"({"command":"evolve","preset":"Identity"})", dir));
  for (const auto& row : read_csv(dir / "trajectory_Identity.csv")) {
    EXPECT_EQ(row[1], 0.0);
    EXPECT_EQ(row[2], 0.0);
    EXPECT_EQ(row[3], 1.0);
  }
}

TEST(Qpt, ExactChiFiles) {
  const fs::path dir = scratch("qpt_x");
  run(config(R"({"command":"qpt","preset":"X_pi","shots":null,"decoherence":false})", dir));
  const json chi = json::parse(slurp(dir / "chi_X_pi.json"));
  EXPECT_EQ(chi["basis"], json({"I", "X", "Y", "Z"}));
  EXPECT_NEAR(chi["re"][1][1].get<double>(), 1.0, 1e-4);
  EXPECT_TRUE(chi["measurement"]["shots"].is_null());
  std::string header;
  std::ifstream f(dir / "chi_X_pi.csv");
  std::getline(f, header);
  EXPECT_EQ(header, "row,col,re,im");

  const fs::path hdir = scratch("qpt_h");
  run(config(R"({"command":"qpt","preset":"Hadamard","shots":null,"decoherence":false})", hdir));
  const json h = json::parse(slurp(hdir / "chi_Hadamard.json"));
  for (auto [i, j] : {std::pair{1, 1}, {3, 3}, {1, 3}, {3, 1}}) {
    EXPECT_NEAR(h["re"][i][j].get<double>(), 0.5, 1e-3);
  }
}

TEST(Qpt, ProcessFidelityInManifest) {
  const fs::path dir = scratch("qpt_z");
  run(config(R"({"command":"qpt","preset":"Z_half"})", dir));
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  const double fp = manifest["results"]["process_fidelity"];
  EXPECT_GT(fp, 0.9);
  EXPECT_LE(fp, 1.0);
}

TEST(Rb, AbstractValidationRun) {
  const fs::path dir = scratch("rb_abstract");
  const RunResult r = run(config(
      R"({"command":"rb","rb_mode":"abstract","depol_p":0.995,"depol_p_gate":0.99,"k":10,
          "interleave":["X_pi"]})",
      dir));
  EXPECT_NEAR(r.results["p"].get<double>(), 0.995, 5e-4);
  EXPECT_NEAR(r.results["gates"]["X_pi"]["F_g"].get<double>(), 0.995, 1e-3);
  std::istringstream summary(slurp(dir / "rb_summary.csv"));
  std::string line;
  std::getline(summary, line);
  EXPECT_EQ(line, "kind,p,p_stderr,fidelity,fidelity_stderr,warning");
  std::getline(summary, line);
  EXPECT_EQ(line.rfind("reference,", 0), 0u);
  std::getline(summary, line);
  EXPECT_EQ(line.rfind("interleaved:X_pi,", 0), 0u);
  std::ifstream f(dir / "rb_fseq.csv");
  std::getline(f, line);
  EXPECT_EQ(line, "m,f_seq,stderr,kind");
  const json fit = json::parse(slurp(dir / "rb_fit_interleaved_X_pi.json"));
  for (const char* key : {"A0", "B0", "p", "F_g", "residual_norm", "config", "seed"}) {
    EXPECT_TRUE(fit.contains(key)) << key;
  }
}

int run_cli(const std::string& args) {
  const int status = std::system(fmt::format("{} {} >/dev/null 2>&1", STAGATE_EXE, args).c_str());
  return WEXITSTATUS(status);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  EXPECT_EQ(run_cli(fmt::format("synth --out {}", (dir / "ok").string())), 0);
  EXPECT_EQ(run_cli(fmt::format("synth --out {} --set T_ns=-3", (dir / "bad").string())), 2);
  EXPECT_EQ(run_cli(fmt::format("synth --out {} --set what=1", (dir / "bad").string())), 2);
  EXPECT_EQ(run_cli("teleport"), 2);
  std::ofstream(dir / "blocker") << "x";
  EXPECT_EQ(run_cli(fmt::format("synth --out {}", (dir / "blocker" / "sub").string())), 4);
  // Noiseless abstract RB has no decay to fit.
  EXPECT_EQ(run_cli(fmt::format("rb --out {} --set rb_mode=abstract --set depol_p=1 --set k=2",
                                (dir / "flat").string())),
            3);
}

TEST(Cli, ConfigFileSeedAndEpoch) {
  const fs::path dir = scratch("cli_epoch");
  fs::create_directories(dir);
  std::ofstream(dir / "cfg.json") << R"({"command":"qpt","preset":"X_half","seed":5})";
  const std::string base = fmt::format("qpt --config {} --seed 11", (dir / "cfg.json").string());
  ASSERT_EQ(run_cli(fmt::format("{} --out {}", base, (dir / "a").string())), 0);
  const int status = std::system(fmt::format("SOURCE_DATE_EPOCH=1700000000 {} {} --out {} >/dev/null",
                                             STAGATE_EXE, base, (dir / "b").string())
                                     .c_str());
  ASSERT_EQ(WEXITSTATUS(status), 0);
  const json m = json::parse(slurp(dir / "b" / "manifest.json"));
  EXPECT_EQ(m["seed"], 11);
  EXPECT_EQ(m["started_at"], "2023-11-14T22:13:20Z");
  EXPECT_EQ(slurp(dir / "a" / "chi_X_half.json"), slurp(dir / "b" / "chi_X_half.json"));
}

}  // namespace
}  // namespace sta::cli
