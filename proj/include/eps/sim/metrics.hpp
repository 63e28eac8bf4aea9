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
#include <vector>

#include "eps/protocol/messages.hpp"

namespace eps::sim {

/// Cumulative per-entity counters, joules. Merge losses on a switch port
/// are charged to the source or load on that port.
struct EntityMetrics {
  protocol::Address address;
  std::string role;  // source | switch | load
  double energy_requested = 0.0;  // asked for by this entity
  double energy_granted = 0.0;    // load, switch: granted to it; source: granted by it
  double energy_delivered = 0.0;  // received into its receiving capacitor(s)
  double energy_supplied = 0.0;   // sent onward
  double energy_dissipated = 0.0;
};

struct Metrics {
  std::uint64_t total_slots = 0;
  std::vector<EntityMetrics> entities;      // ascending address
  std::vector<std::uint64_t> bank_busy_slots;  // per bank: slots connected to a port
  std::map<std::uint64_t, std::uint64_t> latency_histogram;  // request-to-delivery slots -> count

  const EntityMetrics* find(protocol::Address a) const noexcept;
  double bank_utilization(std::size_t bank) const noexcept;
};

void write_metrics_csv(std::ostream& os, const Metrics& m);
void write_bank_utilization_csv(std::ostream& os, const Metrics& m);
void write_latency_csv(std::ostream& os, const Metrics& m);

}  // namespace eps::sim
