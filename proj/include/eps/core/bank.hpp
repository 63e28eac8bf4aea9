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
#include <span>
#include <variant>
#include <vector>

#include "eps/core/switch_config.hpp"
#include "eps/physics/capacitor.hpp"

namespace eps::core {

using PortId = std::uint32_t;
using BankId = std::uint32_t;

struct Idle {
  friend bool operator==(Idle, Idle) = default;
};
struct Charging {
  PortId input;
  friend bool operator==(Charging, Charging) = default;
};
struct Discharging {
  PortId output;
  friend bool operator==(Discharging, Discharging) = default;
};

/// A bank is wired to nothing, one input, or one output.
using Connection = std::variant<Idle, Charging, Discharging>;

struct BankState {
  BankId id = 0;
  physics::Capacitor capacitor{1.0, 0.0};
  Connection connection = Idle{};

  bool idle() const noexcept { return std::holds_alternative<Idle>(connection); }
};

/// All k banks, idle, at the same initial voltage.
std::vector<BankState> make_banks(const SwitchConfig& config, double initial_voltage);

inline bool is_full(const BankState& bank, const SwitchConfig& config) noexcept {
  return bank.capacitor.voltage() >= config.rated_voltage - kVoltageMatchTolerance;
}

double stored_energy(std::span<const BankState> banks) noexcept;

struct BankGroup {
  double voltage = 0.0;
  std::vector<BankId> ids;  // ascending
};

/// Banks flagged in `candidate` split into groups whose voltages agree
/// within kVoltageMatchTolerance; highest voltage first when `descending`.
std::vector<BankGroup> equal_voltage_groups(std::span<const BankState> banks, const std::vector<bool>& candidate,
                                            bool descending);

}  // namespace eps::core
