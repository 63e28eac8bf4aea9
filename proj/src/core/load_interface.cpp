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

#include "eps/core/load_interface.hpp"

#include "eps/error.hpp"

namespace eps::core {

std::string_view to_string(InterfaceMode mode) noexcept {
  return mode == InterfaceMode::half_cycle ? "half_cycle" : "full_cycle";
}

LoadInterface::LoadInterface(InterfaceMode mode, std::vector<physics::Capacitor> caps, physics::Capacitor load,
                             unsigned charging)
    : mode_(mode), caps_(std::move(caps)), load_(load), charging_(charging) {}

LoadInterface LoadInterface::half_cycle(physics::Capacitor interface_cap, physics::Capacitor load_cap) {
  return LoadInterface(InterfaceMode::half_cycle, {interface_cap}, load_cap, 0);
}

LoadInterface LoadInterface::full_cycle(physics::Capacitor first, physics::Capacitor second,
                                        physics::Capacitor load_cap, unsigned charging_index) {
  require(charging_index < 2, "full-cycle charging index must be 0 or 1");
  return LoadInterface(InterfaceMode::full_cycle, {first, second}, load_cap, charging_index);
}

LoadInterface LoadInterface::with_cap(unsigned index, physics::Capacitor cap) const {
  require(index < caps_.size(), "interface capacitor index out of range");
  LoadInterface out = *this;
  out.caps_[index] = cap;
  return out;
}

LoadInterface LoadInterface::with_load(physics::Capacitor cap) const {
  LoadInterface out = *this;
  out.load_ = cap;
  return out;
}

LoadInterface LoadInterface::flipped() const {
  LoadInterface out = *this;
  if (mode_ == InterfaceMode::full_cycle) out.charging_ = 1u - charging_;
  return out;
}

namespace {

// Supplier → load capacitor, only downhill.
void supply_load(LoadInterface& iface, unsigned supplier, InterfaceStep& step) {
  const auto& src = iface.interface_caps()[supplier];
  const auto& load = iface.load_capacitor();
  if (!(src.voltage() > load.voltage())) return;
  const auto outcome = physics::merge(src, load);
  iface = iface.with_cap(supplier, src.with_voltage(outcome.equilibrium_voltage))
              .with_load(load.with_voltage(outcome.equilibrium_voltage));
  step.energy_to_load = outcome.energy_delivered_to_load;
  step.energy_dissipated = outcome.energy_dissipated;
}

void land(LoadInterface& iface, const InterfaceDelivery& delivery) {
  const auto& cap = iface.interface_caps()[delivery.target];
  iface = iface.with_cap(delivery.target, cap.with_voltage(delivery.outcome.equilibrium_voltage));
}

}  // namespace

InterfaceStep step_full_cycle_interface(const LoadInterface& interface,
                                        const std::optional<InterfaceDelivery>& incoming) {
  require(interface.mode() == InterfaceMode::full_cycle, "step_full_cycle_interface: interface is not full-cycle");
  if (incoming && incoming->target != interface.charging_index()) {
    throw ProtocolError("full-cycle interface: incoming transfer addressed to the supplying capacitor");
  }
  InterfaceStep step{interface, 0.0, 0.0};
  supply_load(step.interface, interface.supplying_index(), step);
  if (incoming) land(step.interface, *incoming);
  step.interface = step.interface.flipped();
  return step;
}

InterfaceStep step_half_cycle_interface(const LoadInterface& interface,
                                        const std::optional<InterfaceDelivery>& incoming, bool hold) {
  require(interface.mode() == InterfaceMode::half_cycle, "step_half_cycle_interface: interface is not half-cycle");
  InterfaceStep step{interface, 0.0, 0.0};
  if (incoming) {
    if (incoming->target != 0) throw ProtocolError("half-cycle interface has a single capacitor");
    land(step.interface, *incoming);
  } else if (!hold) {
    supply_load(step.interface, 0, step);
  }
  return step;
}

}  // namespace eps::core
