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
#include <map>
#include <set>
#include <span>
#include <vector>

#include "eps/core/bank.hpp"

namespace eps::core {

/// Crossbar configuration for one slot. A bank id may appear in at most one
/// link set across both maps.
struct SlotAssignment {
  std::uint64_t slot = 0;
  std::map<PortId, std::set<BankId>> input_links;
  std::map<PortId, std::set<BankId>> output_links;

  bool empty() const noexcept;
  friend bool operator==(const SlotAssignment&, const SlotAssignment&) = default;
};

/// Throws ProtocolError if a bank is linked twice or any id is out of range.
void validate(const SlotAssignment& assignment, const SwitchConfig& config);

/// Banks named by the assignment take its connection; all others go idle.
std::vector<BankState> apply_assignment(std::span<const BankState> banks, const SlotAssignment& assignment,
                                        const SwitchConfig& config);

}  // namespace eps::core
