// Copyright 2026 The EPS Simulator Authors
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

#include "eps/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace eps::cli {

using json = nlohmann::json;

ConfigError::ConfigError(std::string_view code, std::string field, const std::string& message)
    : std::runtime_error(message), code_(code), field_(std::move(field)) {}

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& message) {
  throw ConfigError(code::config_field, field, message);
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
  for (const auto& [k, v] : obj.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) bad(join(path, k), "unknown key");
}

const json* find(const json& obj, std::string_view key) {
  const auto it = obj.find(std::string(key));
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& obj, const std::string& path, std::string_view key, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) bad(join(path, key), "expected a number");
  return v->get<double>();
}

std::uint64_t count(const json& obj, const std::string& path, std::string_view key, std::uint64_t fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_float()) {
    const double d = v->get<double>();
    if (d >= 0.0 && d < 0x1p63 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
  }
  bad(join(path, key), "expected a non-negative integer");
}

sim::Address address(const json& obj, const std::string& path, std::string_view key,
                     std::optional<sim::Address> fallback = std::nullopt) {
  const json* v = find(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    bad(join(path, key), "required");
  }
  if (!v->is_string()) bad(join(path, key), "expected a dotted-quad string");
  const auto a = sim::Address::parse(v->get<std::string>());
  if (!a) bad(join(path, key), "not a dotted-quad address: " + v->get<std::string>());
  return *a;
}

const json& array(const json& obj, const std::string& path, std::string_view key) {
  static const json empty = json::array();
  const json* v = find(obj, key);
  if (!v) return empty;
  if (!v->is_array()) bad(join(path, key), "expected an array");
  return *v;
}

void read_switch(const json& j, sim::ScenarioConfig& s) {
  const std::string p = "switch";
  expect_object(j, p);
  only_keys(j, p,
            {"address", "num_inputs", "num_outputs", "num_banks", "bank_capacitance", "rated_voltage",
             "max_bank_voltage", "initial_bank_voltage", "low_water"});
  auto& sw = s.switch_config;
  s.switch_address = address(j, p, "address", s.switch_address);
  sw.num_inputs = count(j, p, "num_inputs", sw.num_inputs);
  sw.num_outputs = count(j, p, "num_outputs", sw.num_outputs);
  sw.num_banks = count(j, p, "num_banks", sw.num_banks);
  sw.bank_capacitance = number(j, p, "bank_capacitance", sw.bank_capacitance);
  sw.rated_voltage = number(j, p, "rated_voltage", sw.rated_voltage);
  sw.max_bank_voltage = number(j, p, "max_bank_voltage", sw.max_bank_voltage);
  if (find(j, "initial_bank_voltage")) s.initial_bank_voltage = number(j, p, "initial_bank_voltage", 0.0);
  s.low_water = number(j, p, "low_water", s.low_water);
}

sim::SourceSpec read_source(const json& j, const std::string& p) {
  expect_object(j, p);
  only_keys(j, p, {"address", "feeder_capacity", "voltage"});
  sim::SourceSpec src;
  src.address = address(j, p, "address");
  if (!find(j, "feeder_capacity")) bad(join(p, "feeder_capacity"), "required");
  src.feeder_capacity = number(j, p, "feeder_capacity", 0.0);
  src.voltage = number(j, p, "voltage", src.voltage);
  return src;
}

sim::LoadSpec read_load(const json& j, const std::string& p) {
  expect_object(j, p);
  only_keys(j, p, {"address", "capacitance", "initial_voltage", "load_capacitance", "mode", "demands"});
  sim::LoadSpec l;
  l.address = address(j, p, "address");
  l.capacitance = number(j, p, "capacitance", l.capacitance);
  l.initial_voltage = number(j, p, "initial_voltage", l.initial_voltage);
  if (find(j, "load_capacitance")) l.load_capacitance = number(j, p, "load_capacitance", 0.0);
  if (const json* m = find(j, "mode")) {
    const std::string mode = m->is_string() ? m->get<std::string>() : "";
    if (mode == "half_cycle")
      l.mode = core::InterfaceMode::half_cycle;
    else if (mode == "full_cycle")
      l.mode = core::InterfaceMode::full_cycle;
    else
      bad(join(p, "mode"), "expected \"half_cycle\" or \"full_cycle\"");
  }
  const json& demands = array(j, p, "demands");
  const std::string dp = join(p, "demands");
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const std::string ip = index(dp, i);
    const json& d = demands[i];
    expect_object(d, ip);
    only_keys(d, ip, {"slot", "joules"});
    if (!find(d, "slot")) bad(join(ip, "slot"), "required");
    if (!find(d, "joules")) bad(join(ip, "joules"), "required");
    l.demands.push_back({count(d, ip, "slot", 0), number(d, ip, "joules", 0.0)});
  }
  return l;
}

void read_network(const json& j, sim::ScenarioConfig& s) {
  const std::string p = "network";
  expect_object(j, p);
  only_keys(j, p, {"latency_slots", "loss_probability", "links"});
  auto& n = s.network;
  n.latency_slots = count(j, p, "latency_slots", n.latency_slots);
  n.loss_probability = number(j, p, "loss_probability", n.loss_probability);
  const json& links = array(j, p, "links");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string ip = index(join(p, "links"), i);
    const json& l = links[i];
    expect_object(l, ip);
    only_keys(l, ip, {"from", "to", "latency_slots", "loss_probability"});
    sim::LinkSpec link;
    link.from = address(l, ip, "from");
    link.to = address(l, ip, "to");
    link.latency_slots = count(l, ip, "latency_slots", n.latency_slots);
    link.loss_probability = number(l, ip, "loss_probability", n.loss_probability);
    n.links.push_back(link);
  }
}

void read_run(const json& j, sim::ScenarioConfig& s) {
  const std::string p = "run";
  expect_object(j, p);
  only_keys(j, p, {"total_slots", "rng_seed", "slot_duration", "out_dir"});
  auto& r = s.run;
  r.total_slots = count(j, p, "total_slots", r.total_slots);
  r.rng_seed = count(j, p, "rng_seed", r.rng_seed);
  r.slot_duration = number(j, p, "slot_duration", r.slot_duration);
  if (const json* o = find(j, "out_dir")) {
    if (!o->is_string()) bad("run.out_dir", "expected a string");
    r.out_dir = o->get<std::string>();
  }
}

// nlohmann reports a byte offset just past the offending character.
void locate(ConfigError& err, std::string_view text, std::size_t byte) {
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  err.line = line;
  err.column = column;
}

}  // namespace

sim::ScenarioConfig parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    ConfigError err(code::config_parse, "", what);
    locate(err, text, e.byte);
    throw err;
  }
  sim::ScenarioConfig s;
  expect_object(root, "");
  only_keys(root, "", {"switch", "sources", "loads", "network", "run"});
  if (const json* j = find(root, "switch")) read_switch(*j, s);
  const json& sources = array(root, "", "sources");
  for (std::size_t i = 0; i < sources.size(); ++i) s.sources.push_back(read_source(sources[i], index("sources", i)));
  const json& loads = array(root, "", "loads");
  for (std::size_t i = 0; i < loads.size(); ++i) s.loads.push_back(read_load(loads[i], index("loads", i)));
  if (const json* j = find(root, "network")) read_network(*j, s);
  if (const json* j = find(root, "run")) read_run(*j, s);
  try {
    sim::validate(s);
  } catch (const sim::ScenarioError& e) {
    std::string what = e.what();
    if (what.rfind(e.field() + ": ", 0) == 0) what.erase(0, e.field().size() + 2);
    throw ConfigError(code::config_field, e.field(), what);
  }
  return s;
}

sim::ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(code::config_io, "", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace eps::cli
