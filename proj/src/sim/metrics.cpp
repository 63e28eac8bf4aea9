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

#include "eps/sim/metrics.hpp"

#include <ostream>

#include "eps/numfmt.hpp"

namespace eps::sim {

const EntityMetrics* Metrics::find(protocol::Address a) const noexcept {
  for (const auto& e : entities)
    if (e.address == a) return &e;
  return nullptr;
}

double Metrics::bank_utilization(std::size_t bank) const noexcept {
  if (total_slots == 0 || bank >= bank_busy_slots.size()) return 0.0;
  return static_cast<double>(bank_busy_slots[bank]) / static_cast<double>(total_slots);
}

void write_metrics_csv(std::ostream& os, const Metrics& m) {
  os << "entity,role,energy_requested_J,energy_granted_J,energy_delivered_J,energy_supplied_J,energy_dissipated_J\n";
  for (const auto& e : m.entities) {
    os << e.address.to_string() << ',' << e.role << ',' << format_double(e.energy_requested) << ','
       << format_double(e.energy_granted) << ',' << format_double(e.energy_delivered) << ','
       << format_double(e.energy_supplied) << ',' << format_double(e.energy_dissipated) << '\n';
  }
}

void write_bank_utilization_csv(std::ostream& os, const Metrics& m) {
  os << "bank,busy_slots,utilization\n";
  for (std::size_t i = 0; i < m.bank_busy_slots.size(); ++i)
    os << i << ',' << m.bank_busy_slots[i] << ',' << format_double(m.bank_utilization(i)) << '\n';
}

void write_latency_csv(std::ostream& os, const Metrics& m) {
  os << "latency_slots,count\n";
  for (const auto& [lat, count] : m.latency_histogram) os << lat << ',' << count << '\n';
}

}  // namespace eps::sim
