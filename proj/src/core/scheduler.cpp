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

#include "eps/core/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "eps/core/bank_selection.hpp"
#include "eps/physics/exchange.hpp"

namespace eps::core {
namespace {

double recharge_gain(const InputSupply& supply, std::size_t count, double volts, double cb) {
  const physics::Capacitor aggregate(static_cast<double>(count) * cb, volts);
  if (!supply.capacitance) return physics::charge_from_voltage_source(aggregate, supply.voltage).energy_stored;
  return physics::merge(physics::Capacitor(*supply.capacitance, supply.voltage), aggregate).energy_delivered_to_load;
}

}  // namespace

SlotAssignment FifoScheduler::schedule(std::uint64_t slot, std::span<const PendingGrant> grants,
                                       std::span<const PendingRecharge> recharges, std::span<const BankState> banks,
                                       const SwitchConfig& config) const {
  SlotAssignment out;
  out.slot = slot;
  std::vector<bool> used(banks.size(), false);

  std::vector<std::size_t> order(grants.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (grants[a].arrival != grants[b].arrival) return grants[a].arrival < grants[b].arrival;
    return grants[a].granted_energy > grants[b].granted_energy;
  });

  std::vector<bool> held(banks.size(), false);
  for (const auto& g : grants)
    for (BankId id : g.reserved)
      if (id < banks.size()) held[id] = true;

  for (std::size_t gi : order) {
    const PendingGrant& g = grants[gi];
    if (!(g.granted_energy > 0.0) || g.output >= config.num_outputs || out.output_links.contains(g.output)) continue;
    std::vector<bool> candidate(banks.size(), false);
    if (g.reserved.empty()) {
      for (std::size_t i = 0; i < banks.size(); ++i) candidate[i] = !used[i] && !held[i] && is_full(banks[i], config);
    } else {
      for (BankId id : g.reserved)
        if (id < banks.size()) candidate[id] = !used[id] && is_full(banks[id], config);
    }
    const unsigned k = g.reserved.empty() ? static_cast<unsigned>(config.num_banks)
                                          : static_cast<unsigned>(g.reserved.size());
    for (const BankGroup& group : equal_voltage_groups(banks, candidate, true)) {
      if (!(g.receiver.voltage() < group.voltage)) continue;
      const auto sel = select_bank_count(g.granted_energy, g.receiver, group.voltage, k, config.bank_capacitance);
      if (sel.n > group.ids.size()) continue;
      auto& link = out.output_links[g.output];
      for (unsigned i = 0; i < sel.n; ++i) {
        link.insert(group.ids[i]);
        used[group.ids[i]] = true;
      }
      break;
    }
  }

  std::vector<std::size_t> rorder(recharges.size());
  std::iota(rorder.begin(), rorder.end(), std::size_t{0});
  std::stable_sort(rorder.begin(), rorder.end(),
                   [&](std::size_t a, std::size_t b) { return recharges[a].input < recharges[b].input; });

  for (std::size_t ri : rorder) {
    const PendingRecharge& r = recharges[ri];
    if (!(r.budget > 0.0) || r.input >= config.num_inputs || out.input_links.contains(r.input)) continue;
    if (r.supply.voltage > config.max_bank_voltage) continue;
    std::vector<bool> candidate(banks.size());
    for (std::size_t i = 0; i < banks.size(); ++i) {
      const double v = banks[i].capacitor.voltage();
      candidate[i] = !used[i] && !held[i] && !is_full(banks[i], config) && v < r.supply.voltage;
    }
    const auto groups = equal_voltage_groups(banks, candidate, false);
    if (groups.empty()) continue;
    const BankGroup& lowest = groups.front();
    std::size_t take = lowest.ids.size();
    for (std::size_t m = 1; m <= lowest.ids.size(); ++m) {
      if (recharge_gain(r.supply, m, lowest.voltage, config.bank_capacitance) >= r.budget) {
        take = m;
        break;
      }
    }
    auto& link = out.input_links[r.input];
    for (std::size_t i = 0; i < take; ++i) {
      link.insert(lowest.ids[i]);
      used[lowest.ids[i]] = true;
    }
  }
  return out;
}

SlotAssignment schedule_slot(std::uint64_t slot, std::span<const PendingGrant> grants,
                             std::span<const PendingRecharge> recharges, std::span<const BankState> banks,
                             const SwitchConfig& config) {
  return FifoScheduler{}.schedule(slot, grants, recharges, banks, config);
}

}  // namespace eps::core
