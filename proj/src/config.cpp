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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "sta/cli_io.hpp"

namespace sta::cli {

using nlohmann::json;
using Kind = ConfigError::Kind;

namespace {

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys{
      "command",     "preset",       "cd",         "drag",
      "model",       "A_mhz",        "T_ns",       "delta2_mhz",
      "steps",       "decoherence",  "T1_ns",      "Tphi_ns",
      "dephasing_convention",        "shots",      "readout_f0",
      "readout_f1",  "mitigate_readout",           "rb_mode",
      "k",           "m_list",       "rb_shots",   "depol_p",
      "depol_p_gate", "interleave",  "gap_ns",     "seed",
      "out"};
  return keys;
}

[[noreturn]] void type_error(const std::string& key, const char* expected) {
  throw ConfigError(Kind::Type, key, fmt::format("{}: expected {}", key, expected));
}

[[noreturn]] void constraint(const std::string& key, const std::string& what) {
  throw ConfigError(Kind::Constraint, key, fmt::format("{}: {}", key, what));
}

class Reader {
 public:
  explicit Reader(const json& doc) : doc_(doc) {}

  const json* find(const std::string& key) const {
    auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  void read(const std::string& key, bool& out) const {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) type_error(key, "a boolean");
      out = v->get<bool>();
    }
  }

  void read(const std::string& key, double& out) const {
    if (const json* v = find(key)) out = number(key, *v);
  }

  void read(const std::string& key, std::optional<double>& out) const {
    if (const json* v = find(key)) {
      out = v->is_null() ? std::nullopt : std::optional<double>(number(key, *v));
    }
  }

  void read(const std::string& key, std::uint64_t& out) const {
    if (const json* v = find(key)) out = count(key, *v);
  }

  void read(const std::string& key, std::optional<std::uint64_t>& out) const {
    if (const json* v = find(key)) {
      out = v->is_null() ? std::nullopt : std::optional<std::uint64_t>(count(key, *v));
    }
  }

  void read(const std::string& key, std::string& out) const {
    if (const json* v = find(key)) {
      if (!v->is_string()) type_error(key, "a string");
      out = v->get<std::string>();
    }
  }

 private:
  static double number(const std::string& key, const json& v) {
    if (!v.is_number()) type_error(key, "a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) constraint(key, "must be finite");
    return x;
  }

  static std::uint64_t count(const std::string& key, const json& v) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) constraint(key, fmt::format("must be >= 0 (got {})", v.dump()));
    type_error(key, "a non-negative integer");
  }

  const json& doc_;
};

template <typename Enum>
Enum read_enum(const Reader& r, const std::string& key, Enum current,
               const std::map<std::string, Enum, std::less<>>& names) {
  const json* v = r.find(key);
  if (!v) return current;
  if (!v->is_string()) type_error(key, "a string");
  const auto it = names.find(v->get<std::string>());
  if (it == names.end()) {
    std::string allowed;
    for (const auto& [name, value] : names) allowed += (allowed.empty() ? "" : ", ") + name;
    constraint(key, fmt::format("unknown value \"{}\" (allowed: {})", v->get<std::string>(),
                                allowed));
  }
  return it->second;
}

PresetName preset_from(const std::string& key, const json& v) {
  if (!v.is_string()) type_error(key, "a preset name");
  const auto name = parse_preset_name(v.get<std::string>());
  if (!name) constraint(key, fmt::format("unknown preset \"{}\"", v.get<std::string>()));
  return *name;
}

const std::map<std::string, Command, std::less<>> kCommands{
    {"synth", Command::Synth}, {"evolve", Command::Evolve}, {"qpt", Command::Qpt},
    {"rb", Command::Rb}};
const std::map<std::string, LevelModel, std::less<>> kModels{
    {"two_level", LevelModel::TwoLevel}, {"three_level", LevelModel::ThreeLevel}};
const std::map<std::string, DephasingConvention, std::less<>> kConventions{
    {"pure", DephasingConvention::Pure}, {"from_t2", DephasingConvention::FromT2}};
const std::map<std::string, RbMode, std::less<>> kRbModes{{"pulse", RbMode::Pulse},
                                                          {"abstract", RbMode::Abstract}};

template <typename Enum>
std::string name_of(const std::map<std::string, Enum, std::less<>>& names, Enum value) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return {};
}

void validate(const ExperimentConfig& c) {
  auto positive = [](const std::string& key, double x) {
    if (!(x > 0.0)) constraint(key, fmt::format("must be > 0 (got {})", x));
  };
  positive("A_mhz", c.A_mhz);
  positive("T_ns", c.T_ns);
  if (c.delta2_mhz == 0.0) constraint("delta2_mhz", "must be nonzero");
  if (c.steps < kMinSteps) constraint("steps", fmt::format("must be >= {}", kMinSteps));
  if (c.drag && !c.cd) constraint("drag", "requires cd = true");
  if (c.T1_ns) positive("T1_ns", *c.T1_ns);
  if (c.Tphi_ns) positive("Tphi_ns", *c.Tphi_ns);
  if (c.shots && *c.shots == 0) constraint("shots", "must be >= 1 or null");
  if (c.rb_shots && *c.rb_shots == 0) constraint("rb_shots", "must be >= 1 or null");
  for (const auto& [key, f] : {std::pair{"readout_f0", c.readout_f0}, {"readout_f1", c.readout_f1}}) {
    if (!(f > 0.5 && f <= 1.0)) constraint(key, fmt::format("must lie in (0.5, 1] (got {})", f));
  }
  if (c.k < 1) constraint("k", "must be >= 1");
  if (c.m_list.size() < 4) constraint("m_list", "needs at least 4 lengths for the decay fit");
  for (std::size_t i = 0; i < c.m_list.size(); ++i) {
    if (c.m_list[i] < 1) constraint("m_list", "lengths must be >= 1");
    if (i > 0 && c.m_list[i] <= c.m_list[i - 1]) constraint("m_list", "must increase strictly");
  }
  for (const auto& [key, p] : {std::pair{"depol_p", c.depol_p}, {"depol_p_gate", c.depol_p_gate}}) {
    if (!(p > 0.0 && p <= 1.0)) constraint(key, fmt::format("must lie in (0, 1] (got {})", p));
  }
  if (c.gap_ns < 0.0) constraint("gap_ns", "must be >= 0");
  if (c.out.empty()) constraint("out", "must not be empty");
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Synth: return "synth";
    case Command::Evolve: return "evolve";
    case Command::Qpt: return "qpt";
    case Command::Rb: return "rb";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view text) {
  const auto it = kCommands.find(text);
  if (it == kCommands.end()) return std::nullopt;
  return it->second;
}

Override parse_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(Kind::Syntax, std::string(assignment),
                      fmt::format("override \"{}\" is not of the form key=value", assignment));
  }
  return {std::string(assignment.substr(0, eq)), std::string(assignment.substr(eq + 1))};
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError(Kind::Syntax, "", "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().count(key)) {
      throw ConfigError(Kind::UnknownKey, key, fmt::format("unknown key \"{}\"", key));
    }
  }

  const Reader r(doc);
  ExperimentConfig c;
  if (!r.find("command")) constraint("command", "is required");
  c.command = read_enum(r, "command", c.command, kCommands);
  if (const json* v = r.find("preset")) c.preset = preset_from("preset", *v);
  r.read("cd", c.cd);
  r.read("drag", c.drag);
  c.model = read_enum(r, "model", c.model, kModels);
  r.read("A_mhz", c.A_mhz);
  r.read("T_ns", c.T_ns);
  r.read("delta2_mhz", c.delta2_mhz);
  r.read("steps", c.steps);
  r.read("decoherence", c.decoherence);
  r.read("T1_ns", c.T1_ns);
  r.read("Tphi_ns", c.Tphi_ns);
  c.dephasing_convention =
      read_enum(r, "dephasing_convention", c.dephasing_convention, kConventions);
  r.read("shots", c.shots);
  r.read("readout_f0", c.readout_f0);
  r.read("readout_f1", c.readout_f1);
  r.read("mitigate_readout", c.mitigate_readout);
  c.rb_mode = read_enum(r, "rb_mode", c.rb_mode, kRbModes);
  if (const json* v = r.find("k")) {
    if (!v->is_number_integer()) type_error("k", "an integer");
    c.k = v->get<int>();
  }
  if (const json* v = r.find("m_list")) {
    if (!v->is_array()) type_error("m_list", "an array of integers");
    c.m_list.clear();
    for (const json& m : *v) {
      if (!m.is_number_integer()) type_error("m_list", "an array of integers");
      c.m_list.push_back(m.get<int>());
    }
  }
  r.read("rb_shots", c.rb_shots);
  r.read("depol_p", c.depol_p);
  r.read("depol_p_gate", c.depol_p_gate);
  if (const json* v = r.find("interleave")) {
    if (!v->is_array()) type_error("interleave", "an array of preset names");
    for (const json& g : *v) c.interleave.push_back(preset_from("interleave", g));
  } else {
    c.interleave = {c.preset};
  }
  r.read("gap_ns", c.gap_ns);
  r.read("seed", c.seed);
  r.read("out", c.out);

  validate(c);
  return c;
}

ExperimentConfig parse_config(std::string_view text, const std::vector<Override>& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(Kind::Syntax, "", fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ConfigError(Kind::Syntax, "", "config must be a JSON object");
  for (const Override& o : overrides) {
    if (!known_keys().count(o.key)) {
      throw ConfigError(Kind::UnknownKey, o.key, fmt::format("unknown key \"{}\"", o.key));
    }
    json value = json::parse(o.value, nullptr, false);
    if (value.is_discarded()) value = o.value;
    doc[o.key] = std::move(value);
  }
  return config_from_json(doc);
}

json config_to_json(const ExperimentConfig& c) {
  auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  json interleave = json::array();
  for (PresetName g : c.interleave) interleave.push_back(std::string(to_string(g)));
  json doc;
  doc["command"] = std::string(to_string(c.command));
  doc["preset"] = std::string(to_string(c.preset));
  doc["cd"] = c.cd;
  doc["drag"] = c.drag;
  doc["model"] = name_of(kModels, c.model);
  doc["A_mhz"] = c.A_mhz;
  doc["T_ns"] = c.T_ns;
  doc["delta2_mhz"] = c.delta2_mhz;
  doc["steps"] = c.steps;
  doc["decoherence"] = c.decoherence;
  doc["T1_ns"] = opt(c.T1_ns);
  doc["Tphi_ns"] = opt(c.Tphi_ns);
  doc["dephasing_convention"] = name_of(kConventions, c.dephasing_convention);
  doc["shots"] = opt(c.shots);
  doc["readout_f0"] = c.readout_f0;
  doc["readout_f1"] = c.readout_f1;
  doc["mitigate_readout"] = c.mitigate_readout;
  doc["rb_mode"] = name_of(kRbModes, c.rb_mode);
  doc["k"] = c.k;
  doc["m_list"] = c.m_list;
  doc["rb_shots"] = opt(c.rb_shots);
  doc["depol_p"] = c.depol_p;
  doc["depol_p_gate"] = c.depol_p_gate;
  doc["interleave"] = interleave;
  doc["gap_ns"] = c.gap_ns;
  doc["seed"] = c.seed;
  doc["out"] = c.out;
  return doc;
}

std::string serialize_config(const ExperimentConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

EnvelopeParams envelope_of(const ExperimentConfig& c) {
  return EnvelopeParams::make(mhz_to_rad_per_ns(c.A_mhz), c.T_ns);
}

GateSettings gate_settings_of(const ExperimentConfig& c) {
  GateSettings s;
  s.corrections = {c.cd, c.drag};
  s.model = c.model;
  s.delta2 = mhz_to_rad_per_ns(c.delta2_mhz);
  s.steps = c.steps;
  return s;
}

DecoherenceParams decoherence_of(const ExperimentConfig& c) {
  DecoherenceParams d;
  if (!c.decoherence) return d;
  d.t1_ns = c.T1_ns;
  d.tphi_ns = c.Tphi_ns;
  if (c.dephasing_convention == DephasingConvention::FromT2 && c.T1_ns && c.Tphi_ns) {
    d.tphi_ns = pure_dephasing_time(*c.T1_ns, *c.Tphi_ns, DephasingConvention::FromT2);
  }
  return d;
}

MeasurementModel measurement_of(const ExperimentConfig& c) {
  MeasurementModel m;
  m.shots = c.shots;
  m.readout_fidelity_0 = c.readout_f0;
  m.readout_fidelity_1 = c.readout_f1;
  m.mitigate_readout = c.mitigate_readout;
  m.rng_seed = c.seed;
  return m;
}

RbConfig rb_config_of(const ExperimentConfig& c, unsigned threads) {
  RbConfig rb;
  rb.lengths = c.m_list;
  rb.randomizations = c.k;
  rb.mode = c.rb_mode;
  rb.abstract_noise = {c.depol_p, c.depol_p_gate};
  rb.pulse.envelope = envelope_of(c);
  rb.pulse.gate = gate_settings_of(c);
  rb.pulse.decoherence = decoherence_of(c);
  rb.pulse.gap_ns = c.gap_ns;
  if (c.rb_shots) {
    rb.measurement = {c.rb_shots, c.readout_f0, c.readout_f1, false, c.seed};
  } else {
    rb.measurement = MeasurementModel::exact_ideal();
  }
  rb.seed = c.seed;
  rb.threads = threads;
  return rb;
}

}  // namespace sta::cli
