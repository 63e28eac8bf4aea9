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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eps/core/slot_assignment.hpp"
#include "eps/core/transfers.hpp"
#include "eps/protocol/diagnostics.hpp"

namespace eps::sim {

using protocol::Address;

enum class Direction { send, recv, drop };

std::string_view to_string(Direction d) noexcept;

struct MessageRecord {
  std::uint64_t slot = 0;
  Direction direction = Direction::send;
  Address at;  // sender for send/drop, recipient for recv
  protocol::Message message;
};

struct AssignmentRecord {
  core::SlotAssignment assignment;
};

struct TransferRecord {
  core::TransferRow row;
  Address entity;  // source or load on the port
};

/// Bank voltages at the end of a slot that moved energy.
struct BankRecord {
  std::uint64_t slot = 0;
  std::vector<double> voltages;
};

struct InterfaceRecord {
  std::uint64_t slot = 0;
  Address load;
  std::vector<double> interface_voltages;
  double load_voltage = 0.0;
  double energy_to_load = 0.0;
  double dissipated = 0.0;
};

struct DiagnosticRecord {
  std::uint64_t slot = 0;
  protocol::Diagnostic diagnostic;
};

/// A reservation released because its grantee held no live grant.
struct GatedRecord {
  std::uint64_t slot = 0;
  Address grantee;
  std::uint64_t request_id = 0;
};

using TraceRecord = std::variant<MessageRecord, AssignmentRecord, TransferRecord, BankRecord, InterfaceRecord,
                                 DiagnosticRecord, GatedRecord>;

std::uint64_t slot_of(const TraceRecord& r) noexcept;

struct SimulationTrace {
  double bank_capacitance = 1.0;
  double max_bank_voltage = 16.0;
  std::vector<double> initial_bank_voltages;
  std::map<core::PortId, Address> input_ports;
  std::map<core::PortId, Address> output_ports;
  std::vector<TraceRecord> records;

  bool empty() const noexcept { return records.empty(); }
};

std::string render(const TraceRecord& r);

/// Full event log, one record per line after a header.
void write_trace(std::ostream& os, const SimulationTrace& trace);
/// Message records only: slot, direction, type, fields.
void write_protocol_log(std::ostream& os, const SimulationTrace& trace);
/// Transfer rows with the entity column appended.
void write_transfers_csv(std::ostream& os, const SimulationTrace& trace);

}  // namespace eps::sim
