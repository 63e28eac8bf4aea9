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

#include "eps/sim/scenario.hpp"

#include <cmath>
#include <map>

#include "eps/error.hpp"

namespace eps::sim {
namespace {

std::string at(const char* list, std::size_t i, const char* field) {
  return std::string(list) + "[" + std::to_string(i) + "]." + field;
}

void check(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ScenarioError(field, message);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

ScenarioError::ScenarioError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

void validate(const ScenarioConfig& s) {
  try {
    s.switch_config.validate();
  } catch (const PreconditionError& e) {
    throw ScenarioError("switch", e.what());
  }
  const auto& sw = s.switch_config;
  const double v0 = s.bank_voltage_at_start();
  check(std::isfinite(v0) && v0 >= 0.0 && v0 <= sw.max_bank_voltage, "switch.initial_bank_voltage",
        "must be in [0, max_bank_voltage]");
  check(std::isfinite(s.low_water) && s.low_water >= 0.0 && s.low_water <= 1.0, "switch.low_water",
        "must be in [0, 1]");
  check(s.sources.size() <= sw.num_inputs, "sources", "more sources than switch inputs");
  check(s.loads.size() <= sw.num_outputs, "loads", "more loads than switch outputs");

  std::map<Address, std::string> seen{{s.switch_address, "switch.address"}};
  auto claim = [&](Address a, const std::string& field) {
    const auto [it, fresh] = seen.emplace(a, field);
    check(fresh, field, "duplicate address " + a.to_string() + " (also " + it->second + ")");
  };

  for (std::size_t i = 0; i < s.sources.size(); ++i) {
    const auto& src = s.sources[i];
    claim(src.address, at("sources", i, "address"));
    check(positive(src.feeder_capacity), at("sources", i, "feeder_capacity"), "must be positive");
    check(std::isfinite(src.voltage) && src.voltage >= sw.rated_voltage && src.voltage <= sw.max_bank_voltage,
          at("sources", i, "voltage"), "must be in [rated_voltage, max_bank_voltage]");
  }
  for (std::size_t i = 0; i < s.loads.size(); ++i) {
    const auto& l = s.loads[i];
    claim(l.address, at("loads", i, "address"));
    check(positive(l.capacitance), at("loads", i, "capacitance"), "must be positive");
    check(std::isfinite(l.initial_voltage) && l.initial_voltage >= 0.0, at("loads", i, "initial_voltage"),
          "must be non-negative");
    if (l.load_capacitance)
      check(positive(*l.load_capacitance), at("loads", i, "load_capacitance"), "must be positive");
    for (std::size_t j = 0; j < l.demands.size(); ++j) {
      const std::string base = at("loads", i, "demands") + "[" + std::to_string(j) + "]";
      check(positive(l.demands[j].joules), base + ".joules", "must be positive");
      check(j == 0 || l.demands[j - 1].slot <= l.demands[j].slot, base + ".slot", "demand schedule not sorted by slot");
    }
  }

  check(probability(s.network.loss_probability), "network.loss_probability", "must be in [0, 1]");
  for (std::size_t i = 0; i < s.network.links.size(); ++i) {
    const auto& link = s.network.links[i];
    check(seen.contains(link.from), at("network.links", i, "from"), "unknown address " + link.from.to_string());
    check(seen.contains(link.to), at("network.links", i, "to"), "unknown address " + link.to.to_string());
    check(probability(link.loss_probability), at("network.links", i, "loss_probability"), "must be in [0, 1]");
  }
  check(positive(s.run.slot_duration), "run.slot_duration", "must be positive");
}

}  // namespace eps::sim
