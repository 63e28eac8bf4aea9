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
#include <optional>
#include <vector>

#include "eps/sim/trace.hpp"

namespace eps::sim {

/// Energy balance of one slot, all in joules:
/// source_output = load_intake + storage_delta + dissipation.
struct SlotAudit {
  std::uint64_t slot = 0;
  double source_output = 0.0;
  double load_intake = 0.0;
  double storage_delta = 0.0;
  double dissipation = 0.0;
  double violation = 0.0;  // |imbalance| / sum of |terms|
};

struct AuditReport {
  std::vector<SlotAudit> slots;  // slots that moved energy, ascending
  double max_violation = 0.0;
  std::optional<std::uint64_t> worst_slot;
  double tolerance = 1e-9;

  bool clean() const noexcept { return max_violation <= tolerance; }
};

/// Recomputes the balance of every slot from the trace's transfer rows and
/// bank snapshots. Violations are reported, never thrown.
AuditReport global_energy_audit(const SimulationTrace& trace, double tolerance = 1e-9);

void write_audit_csv(std::ostream& os, const AuditReport& report);

}  // namespace eps::sim
