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

#include "eps/sim/audit.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include "eps/numfmt.hpp"

namespace eps::sim {

AuditReport global_energy_audit(const SimulationTrace& trace, double tolerance) {
  AuditReport report;
  report.tolerance = tolerance;
  std::map<std::uint64_t, SlotAudit> slots;
  std::map<std::uint64_t, const BankRecord*> snapshots;
  for (const auto& r : trace.records) {
    if (const auto* t = std::get_if<TransferRecord>(&r)) {
      auto& a = slots[t->row.slot];
      a.slot = t->row.slot;
      if (t->row.port_kind == core::PortKind::input)
        a.source_output += t->row.energy_J;
      else
        a.load_intake += t->row.energy_J;
      a.dissipation += t->row.dissipated_J;
    } else if (const auto* b = std::get_if<BankRecord>(&r)) {
      snapshots[b->slot] = b;
      slots[b->slot].slot = b->slot;
    }
  }

  // Per-bank differences keep small transfers precise next to large stores.
  std::vector<double> volts = trace.initial_bank_voltages;
  for (auto& [slot, a] : slots) {
    if (const auto it = snapshots.find(slot); it != snapshots.end()) {
      const auto& after = it->second->voltages;
      for (std::size_t i = 0; i < after.size() && i < volts.size(); ++i) {
        a.storage_delta += 0.5 * trace.bank_capacitance * (after[i] - volts[i]) * (after[i] + volts[i]);
        volts[i] = after[i];
      }
    }
    const double imbalance = a.source_output - a.load_intake - a.storage_delta - a.dissipation;
    const double scale =
        std::abs(a.source_output) + std::abs(a.load_intake) + std::abs(a.storage_delta) + std::abs(a.dissipation);
    a.violation = scale > 0.0 ? std::abs(imbalance) / scale : 0.0;
    if (!std::isfinite(a.violation)) a.violation = INFINITY;
    if (a.violation > report.max_violation) {
      report.max_violation = a.violation;
      report.worst_slot = slot;
    }
    report.slots.push_back(a);
  }
  return report;
}

void write_audit_csv(std::ostream& os, const AuditReport& report) {
  os << "slot,source_output_J,load_intake_J,storage_delta_J,dissipation_J,relative_violation\n";
  for (const auto& a : report.slots) {
    os << a.slot << ',' << format_double(a.source_output) << ',' << format_double(a.load_intake) << ','
       << format_double(a.storage_delta) << ',' << format_double(a.dissipation) << ',' << format_double(a.violation)
       << '\n';
  }
}

}  // namespace eps::sim
