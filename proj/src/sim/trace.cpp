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

#include "eps/sim/trace.hpp"

#include <ostream>

#include "eps/numfmt.hpp"

namespace eps::sim {
namespace {

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(';');
    append_double(out, values[i]);
  }
  return out;
}

std::string links(const std::map<core::PortId, std::set<core::BankId>>& m) {
  std::string out;
  for (const auto& [port, ids] : m) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(port) + ":";
    bool first = true;
    for (auto id : ids) {
      if (!first) out.push_back(';');
      out += std::to_string(id);
      first = false;
    }
  }
  return out.empty() ? "-" : out;
}

std::string field(std::string_view key, double v) {
  std::string out(key);
  out.push_back('=');
  append_double(out, v);
  return out;
}

struct Renderer {
  std::string operator()(const MessageRecord& r) const {
    return "slot=" + std::to_string(r.slot) + " msg dir=" + std::string(to_string(r.direction)) +
           " at=" + r.at.to_string() + " " + protocol::render(r.message);
  }
  std::string operator()(const AssignmentRecord& r) const {
    return "slot=" + std::to_string(r.assignment.slot) + " assign in=" + links(r.assignment.input_links) +
           " out=" + links(r.assignment.output_links);
  }
  std::string operator()(const TransferRecord& r) const {
    const auto& row = r.row;
    std::string out = "slot=" + std::to_string(row.slot) + " transfer " +
                      (row.port_kind == core::PortKind::input ? "input=" : "output=") + std::to_string(row.port_id) +
                      " entity=" + r.entity.to_string() + " banks=";
    for (std::size_t i = 0; i < row.bank_ids.size(); ++i) {
      if (i) out.push_back(';');
      out += std::to_string(row.bank_ids[i]);
    }
    out += " " + field("energy_J", row.energy_J) + " " + field("dissipated_J", row.dissipated_J) +
           " v_after=" + join(row.bank_voltages_after);
    return out;
  }
  std::string operator()(const BankRecord& r) const {
    return "slot=" + std::to_string(r.slot) + " banks v=" + join(r.voltages);
  }
  std::string operator()(const InterfaceRecord& r) const {
    return "slot=" + std::to_string(r.slot) + " interface load=" + r.load.to_string() +
           " v_if=" + join(r.interface_voltages) + " " + field("v_load", r.load_voltage) + " " +
           field("to_load_J", r.energy_to_load) + " " + field("dissipated_J", r.dissipated);
  }
  std::string operator()(const DiagnosticRecord& r) const {
    return "slot=" + std::to_string(r.slot) + " diag " + protocol::render(r.diagnostic);
  }
  std::string operator()(const GatedRecord& r) const {
    return "slot=" + std::to_string(r.slot) + " gated grantee=" + r.grantee.to_string() +
           " id=" + std::to_string(r.request_id);
  }
};

}  // namespace

std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::send: return "send";
    case Direction::recv: return "recv";
    case Direction::drop: return "drop";
  }
  return "?";
}

std::uint64_t slot_of(const TraceRecord& r) noexcept {
  return std::visit(
      [](const auto& rec) -> std::uint64_t {
        using T = std::decay_t<decltype(rec)>;
        if constexpr (std::is_same_v<T, AssignmentRecord>)
          return rec.assignment.slot;
        else if constexpr (std::is_same_v<T, TransferRecord>)
          return rec.row.slot;
        else
          return rec.slot;
      },
      r);
}

std::string render(const TraceRecord& r) { return std::visit(Renderer{}, r); }

void write_trace(std::ostream& os, const SimulationTrace& trace) {
  os << "# eps-trace " << field("bank_C_F", trace.bank_capacitance) << ' '
     << field("max_V", trace.max_bank_voltage) << " v0=" << join(trace.initial_bank_voltages) << '\n';
  for (const auto& [port, addr] : trace.input_ports) os << "# input " << port << ' ' << addr.to_string() << '\n';
  for (const auto& [port, addr] : trace.output_ports) os << "# output " << port << ' ' << addr.to_string() << '\n';
  for (const auto& r : trace.records) os << render(r) << '\n';
}

void write_protocol_log(std::ostream& os, const SimulationTrace& trace) {
  for (const auto& r : trace.records) {
    const auto* m = std::get_if<MessageRecord>(&r);
    if (!m) continue;
    os << "slot=" << m->slot << " dir=" << to_string(m->direction) << " type=" << protocol::render(m->message)
       << '\n';
  }
}

void write_transfers_csv(std::ostream& os, const SimulationTrace& trace) {
  os << core::kTransferCsvHeader << ",entity\n";
  for (const auto& r : trace.records)
    if (const auto* t = std::get_if<TransferRecord>(&r))
      os << core::format_transfer_csv_row(t->row) << ',' << t->entity.to_string() << '\n';
}

}  // namespace eps::sim
