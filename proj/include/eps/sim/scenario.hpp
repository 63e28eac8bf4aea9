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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eps/core/load_interface.hpp"
#include "eps/core/switch_config.hpp"
#include "eps/protocol/messages.hpp"

namespace eps::sim {

using protocol::Address;

struct SourceSpec {
  Address address;
  double feeder_capacity = 0.0;  // J per slot
  double voltage = 12.0;         // V, stiff
};

struct DemandEvent {
  std::uint64_t slot = 0;
  double joules = 0.0;
};

struct LoadSpec {
  Address address;
  double capacitance = 1.0;      // F of each interface capacitor
  double initial_voltage = 0.0;  // V on the interface capacitor(s)
  std::optional<double> load_capacitance;  // downstream capacitor, defaults to `capacitance`
  core::InterfaceMode mode = core::InterfaceMode::half_cycle;
  std::vector<DemandEvent> demands;  // sorted by slot
};

/// Directed link override.
struct LinkSpec {
  Address from;
  Address to;
  std::uint64_t latency_slots = 0;
  double loss_probability = 0.0;
};

struct NetworkSpec {
  std::uint64_t latency_slots = 0;  // default for every directed link
  double loss_probability = 0.0;
  std::vector<LinkSpec> links;
};

struct RunSpec {
  std::uint64_t total_slots = 10;
  std::uint64_t rng_seed = 1;
  double slot_duration = 1e-3;  // s
  std::string out_dir = ".";
};

struct ScenarioConfig {
  core::SwitchConfig switch_config;
  Address switch_address = Address::of(10, 0, 1, 1);
  std::optional<double> initial_bank_voltage;  // defaults to rated voltage
  double low_water = 0.5;
  std::vector<SourceSpec> sources;
  std::vector<LoadSpec> loads;
  NetworkSpec network;
  RunSpec run;

  double bank_voltage_at_start() const { return initial_bank_voltage.value_or(switch_config.rated_voltage); }
};

/// Invalid scenario; `field()` is a path such as `loads[1].address`.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Throws ScenarioError on the first problem found.
void validate(const ScenarioConfig& scenario);

}  // namespace eps::sim
