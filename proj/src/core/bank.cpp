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

#include "eps/core/bank.hpp"

#include <algorithm>
#include <cmath>

#include "eps/error.hpp"

namespace eps::core {

std::vector<BankState> make_banks(const SwitchConfig& config, double initial_voltage) {
  config.validate();
  require(initial_voltage <= config.max_bank_voltage, "initial bank voltage exceeds max_bank_voltage");
  std::vector<BankState> banks;
  banks.reserve(config.num_banks);
  for (std::size_t i = 0; i < config.num_banks; ++i) {
    banks.push_back({static_cast<BankId>(i), physics::Capacitor(config.bank_capacitance, initial_voltage), Idle{}});
  }
  return banks;
}

double stored_energy(std::span<const BankState> banks) noexcept {
  double total = 0.0;
  for (const auto& b : banks) total += b.capacitor.energy();
  return total;
}

std::vector<BankGroup> equal_voltage_groups(std::span<const BankState> banks, const std::vector<bool>& candidate,
                                            bool descending) {
  std::vector<BankId> ids;
  for (std::size_t i = 0; i < banks.size(); ++i)
    if (i < candidate.size() && candidate[i]) ids.push_back(static_cast<BankId>(i));
  std::stable_sort(ids.begin(), ids.end(), [&](BankId a, BankId b) {
    const double va = banks[a].capacitor.voltage();
    const double vb = banks[b].capacitor.voltage();
    return descending ? va > vb : va < vb;
  });
  std::vector<BankGroup> groups;
  for (BankId id : ids) {
    const double v = banks[id].capacitor.voltage();
    if (groups.empty() || std::abs(v - groups.back().voltage) > kVoltageMatchTolerance) groups.push_back({v, {}});
    groups.back().ids.push_back(id);
  }
  for (auto& g : groups) std::sort(g.ids.begin(), g.ids.end());
  return groups;
}

}  // namespace eps::core
