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
#include <limits>
#include <span>
#include <vector>

#include "eps/core/slot_assignment.hpp"
#include "eps/core/transfers.hpp"

namespace eps::core {

struct PendingGrant {
  PortId output = 0;
  double granted_energy = 0.0;  // J still owed in this slot
  physics::Capacitor receiver{1.0, 0.0};
  std::uint64_t arrival = 0;    // grant issue order
  std::vector<BankId> reserved;  // if set, the only banks this grant may use
};

struct PendingRecharge {
  PortId input = 0;
  InputSupply supply;
  double budget = std::numeric_limits<double>::infinity();  // J the banks may take
};

/// Turns the slot's due grants and recharge opportunities into a crossbar
/// configuration.
class SlotScheduler {
 public:
  virtual ~SlotScheduler() = default;
  virtual SlotAssignment schedule(std::uint64_t slot, std::span<const PendingGrant> grants,
                                  std::span<const PendingRecharge> recharges, std::span<const BankState> banks,
                                  const SwitchConfig& config) const = 0;
};

/// Grants in arrival order (larger grant first on ties), each served whole
/// from one equal-voltage group of full idle banks or not at all. A grant
/// with reserved banks draws only from those; other grants never touch them. Leftover
/// depleted idle banks go to recharge inputs, lowest-voltage group first.
class FifoScheduler final : public SlotScheduler {
 public:
  SlotAssignment schedule(std::uint64_t slot, std::span<const PendingGrant> grants,
                          std::span<const PendingRecharge> recharges, std::span<const BankState> banks,
                          const SwitchConfig& config) const override;
};

SlotAssignment schedule_slot(std::uint64_t slot, std::span<const PendingGrant> grants,
                             std::span<const PendingRecharge> recharges, std::span<const BankState> banks,
                             const SwitchConfig& config);

}  // namespace eps::core
