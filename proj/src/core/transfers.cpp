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

#include "eps/core/transfers.hpp"

#include <algorithm>
#include <string>

#include "eps/error.hpp"
#include "eps/numfmt.hpp"
#include "eps/physics/exchange.hpp"

namespace eps::core {
namespace {

// Common voltage of a paralleled group, or ProtocolError if they disagree.
double group_voltage(const std::vector<BankState>& banks, const std::set<BankId>& ids) {
  double lo = banks[*ids.begin()].capacitor.voltage();
  double hi = lo;
  for (BankId b : ids) {
    lo = std::min(lo, banks[b].capacitor.voltage());
    hi = std::max(hi, banks[b].capacitor.voltage());
  }
  if (hi - lo > kVoltageMatchTolerance) {
    throw ProtocolError("banks on one port differ by " + std::to_string(hi - lo) + " V; paralleling would dissipate");
  }
  return banks[*ids.begin()].capacitor.voltage();
}

void check_connections(std::span<const BankState> banks, const SlotAssignment& assignment) {
  std::vector<Connection> expected(banks.size(), Idle{});
  for (const auto& [port, ids] : assignment.input_links)
    for (BankId b : ids) expected[b] = Charging{port};
  for (const auto& [port, ids] : assignment.output_links)
    for (BankId b : ids) expected[b] = Discharging{port};
  for (std::size_t i = 0; i < banks.size(); ++i) {
    if (banks[i].connection != expected[i]) {
      throw ProtocolError("bank " + std::to_string(i) + " connection does not match the slot assignment");
    }
  }
}

void set_group(std::vector<BankState>& banks, const std::set<BankId>& ids, double volts, TransferRow& row) {
  for (BankId b : ids) {
    banks[b].capacitor = banks[b].capacitor.with_voltage(volts);
    row.bank_ids.push_back(b);
    row.bank_voltages_after.push_back(volts);
  }
}

}  // namespace

double TransferRow::bank_energy_change() const noexcept {
  return port_kind == PortKind::input ? energy_J - dissipated_J : -(energy_J + dissipated_J);
}

TransferReport execute_slot_transfers(std::span<const BankState> banks, const SlotAssignment& assignment,
                                      const SwitchConfig& config, const std::map<PortId, InputSupply>& input_supplies,
                                      const std::map<PortId, LoadInterface>& output_loads) {
  validate(assignment, config);
  require(banks.size() == config.num_banks, "execute_slot_transfers: bank list does not match num_banks");
  check_connections(banks, assignment);

  TransferReport report;
  report.banks.assign(banks.begin(), banks.end());
  const double cb = config.bank_capacitance;

  for (const auto& [port, ids] : assignment.input_links) {
    if (ids.empty()) continue;
    const auto supply = input_supplies.find(port);
    if (supply == input_supplies.end()) {
      throw PreconditionError("no supply given for input " + std::to_string(port));
    }
    const InputSupply& src = supply->second;
    if (src.voltage > config.max_bank_voltage) {
      throw ProtocolError("input " + std::to_string(port) + " would charge banks above max_bank_voltage");
    }
    const double v0 = group_voltage(report.banks, ids);
    const physics::Capacitor aggregate(static_cast<double>(ids.size()) * cb, v0);

    TransferRow row;
    row.slot = assignment.slot;
    row.port_kind = PortKind::input;
    row.port_id = port;
    double v_after = 0.0;
    double gain = 0.0;
    if (!src.capacitance) {
      const auto r = src.max_gain ? physics::charge_from_voltage_source(aggregate, src.voltage, *src.max_gain)
                                  : physics::charge_from_voltage_source(aggregate, src.voltage);
      row.energy_J = r.energy_from_source;
      row.dissipated_J = r.energy_dissipated;
      gain = r.energy_stored;
      v_after = r.final_voltage;
    } else {
      const physics::Capacitor source_cap(*src.capacitance, src.voltage);
      const auto m = physics::merge(source_cap, aggregate);
      const auto after = source_cap.with_voltage(m.equilibrium_voltage);
      row.energy_J = source_cap.energy() - after.energy();
      row.dissipated_J = m.energy_dissipated;
      gain = m.energy_delivered_to_load;
      v_after = m.equilibrium_voltage;
      report.sources_after.insert_or_assign(port, after);
    }
    set_group(report.banks, ids, v_after, row);
    report.energy_from_inputs += row.energy_J;
    report.energy_into_banks += gain;
    report.dissipation_in += row.dissipated_J;
    report.rows.push_back(std::move(row));
  }

  for (const auto& [port, ids] : assignment.output_links) {
    if (ids.empty()) continue;
    const auto target = output_loads.find(port);
    if (target == output_loads.end()) {
      throw PreconditionError("no load interface given for output " + std::to_string(port));
    }
    const LoadInterface& iface = target->second;
    const double v0 = group_voltage(report.banks, ids);
    const physics::Capacitor aggregate(static_cast<double>(ids.size()) * cb, v0);
    const auto m = physics::merge(aggregate, iface.receiver());

    TransferRow row;
    row.slot = assignment.slot;
    row.port_kind = PortKind::output;
    row.port_id = port;
    row.energy_J = m.energy_delivered_to_load;
    row.dissipated_J = m.energy_dissipated;
    set_group(report.banks, ids, m.equilibrium_voltage, row);
    report.deliveries.insert_or_assign(port, InterfaceDelivery{iface.charging_index(), m});
    report.energy_from_banks += aggregate.energy() - aggregate.with_voltage(m.equilibrium_voltage).energy();
    report.energy_to_outputs += row.energy_J;
    report.dissipation_out += row.dissipated_J;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string format_transfer_csv_row(const TransferRow& row) {
  std::string s = std::to_string(row.slot);
  s += row.port_kind == PortKind::input ? ",input," : ",output,";
  s += std::to_string(row.port_id);
  s += ',';
  for (std::size_t i = 0; i < row.bank_ids.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(row.bank_ids[i]);
  }
  s += ',';
  append_double(s, row.energy_J);
  s += ',';
  append_double(s, row.dissipated_J);
  s += ',';
  for (std::size_t i = 0; i < row.bank_voltages_after.size(); ++i) {
    if (i) s += ';';
    append_double(s, row.bank_voltages_after[i]);
  }
  return s;
}

}  // namespace eps::core
