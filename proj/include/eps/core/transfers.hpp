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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eps/core/load_interface.hpp"
#include "eps/core/slot_assignment.hpp"

namespace eps::core {

/// What an input port presents to the banks: a stiff DC source, or a finite
/// source capacitor.
struct InputSupply {
  double voltage = 0.0;
  std::optional<double> capacitance;  // empty = stiff
  std::optional<double> max_gain;     // stiff only: J the banks may gain this slot

  static InputSupply stiff(double volts) { return {volts, std::nullopt, std::nullopt}; }
  static InputSupply from_capacitor(const physics::Capacitor& cap) { return {cap.voltage(), cap.capacitance(), std::nullopt}; }
};

enum class PortKind { input, output };

/// One port's exchange in one slot. For inputs energy_J is what left the
/// source; for outputs it is what entered the receiving interface capacitor.
struct TransferRow {
  std::uint64_t slot = 0;
  PortKind port_kind = PortKind::input;
  PortId port_id = 0;
  std::vector<BankId> bank_ids;
  double energy_J = 0.0;
  double dissipated_J = 0.0;
  std::vector<double> bank_voltages_after;  // parallel to bank_ids

  /// Net change of the banks' stored energy implied by this row.
  double bank_energy_change() const noexcept;
  friend bool operator==(const TransferRow&, const TransferRow&) = default;
};

struct TransferReport {
  std::vector<TransferRow> rows;
  std::vector<BankState> banks;                        // voltages after the slot
  std::map<PortId, InterfaceDelivery> deliveries;      // per output
  std::map<PortId, physics::Capacitor> sources_after;  // finite source capacitors only
  double energy_from_inputs = 0.0;
  double energy_into_banks = 0.0;
  double energy_from_banks = 0.0;
  double energy_to_outputs = 0.0;
  double dissipation_in = 0.0;
  double dissipation_out = 0.0;

  double total_dissipation() const noexcept { return dissipation_in + dissipation_out; }
};

/// Power-plane step for one slot. `banks` must already carry the
/// connections of `assignment`. Banks sharing a port are paralleled and must
/// sit within kVoltageMatchTolerance of each other (ProtocolError
/// otherwise). Charging never takes a bank above max_bank_voltage.
TransferReport execute_slot_transfers(std::span<const BankState> banks, const SlotAssignment& assignment,
                                      const SwitchConfig& config, const std::map<PortId, InputSupply>& input_supplies,
                                      const std::map<PortId, LoadInterface>& output_loads);

/// `slot,port_kind,port_id,bank_ids,energy_J,dissipated_J,bank_voltages_after`
/// with ';' joining the list-valued fields.
inline constexpr const char* kTransferCsvHeader =
    "slot,port_kind,port_id,bank_ids,energy_J,dissipated_J,bank_voltages_after";
std::string format_transfer_csv_row(const TransferRow& row);

}  // namespace eps::core
