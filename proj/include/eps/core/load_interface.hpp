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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "eps/physics/exchange.hpp"

namespace eps::core {

enum class InterfaceMode { half_cycle, full_cycle };

std::string_view to_string(InterfaceMode mode) noexcept;

/// Load-side capacitor stage between the switch output and the load
/// capacitor. Half-cycle: one interface capacitor that either receives or
/// supplies in a slot. Full-cycle: a ping-pong pair; the phase selects the
/// one in the charging role and flips every slot.
class LoadInterface {
 public:
  static LoadInterface half_cycle(physics::Capacitor interface_cap, physics::Capacitor load_cap);
  static LoadInterface full_cycle(physics::Capacitor first, physics::Capacitor second, physics::Capacitor load_cap,
                                  unsigned charging_index = 0);

  InterfaceMode mode() const noexcept { return mode_; }
  std::span<const physics::Capacitor> interface_caps() const noexcept { return caps_; }
  const physics::Capacitor& load_capacitor() const noexcept { return load_; }
  unsigned charging_index() const noexcept { return charging_; }
  /// Full-cycle only: the capacitor currently feeding the load.
  unsigned supplying_index() const noexcept { return 1u - charging_; }

  /// The capacitor the switch output connects to this slot.
  const physics::Capacitor& receiver() const noexcept { return caps_[charging_]; }

  LoadInterface with_cap(unsigned index, physics::Capacitor cap) const;
  LoadInterface with_load(physics::Capacitor cap) const;
  LoadInterface flipped() const;

 private:
  LoadInterface(InterfaceMode mode, std::vector<physics::Capacitor> caps, physics::Capacitor load, unsigned charging);

  InterfaceMode mode_;
  std::vector<physics::Capacitor> caps_;
  physics::Capacitor load_;
  unsigned charging_;
};

/// Energy arriving from the switch into interface capacitor `target`.
struct InterfaceDelivery {
  unsigned target = 0;
  physics::MergeOutcome outcome;
};

struct InterfaceStep {
  LoadInterface interface;
  double energy_to_load = 0.0;     // J gained by the load capacitor
  double energy_dissipated = 0.0;  // J lost inside the interface stage
};

/// One slot of the ping-pong pair: the incoming transfer lands on the
/// charging capacitor, the supplying one merges into the load capacitor
/// (only when above it), then the phase flips. Throws ProtocolError if the
/// incoming transfer targets the supplying capacitor.
InterfaceStep step_full_cycle_interface(const LoadInterface& interface, const std::optional<InterfaceDelivery>& incoming);

/// Half duplex: a slot either receives, or (when `hold` is false) supplies
/// the load capacitor.
InterfaceStep step_half_cycle_interface(const LoadInterface& interface, const std::optional<InterfaceDelivery>& incoming,
                                        bool hold = false);

}  // namespace eps::core
