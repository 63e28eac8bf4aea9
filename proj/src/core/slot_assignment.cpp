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

#include "eps/core/slot_assignment.hpp"

#include <string>

#include "eps/error.hpp"

namespace eps::core {
namespace {

void check_links(const std::map<PortId, std::set<BankId>>& links, std::size_t num_ports, const char* kind,
                 const SwitchConfig& config, std::vector<int>& seen) {
  for (const auto& [port, bank_ids] : links) {
    if (port >= num_ports) {
      throw ProtocolError(std::string(kind) + " port " + std::to_string(port) + " out of range");
    }
    for (BankId b : bank_ids) {
      if (b >= config.num_banks) throw ProtocolError("bank " + std::to_string(b) + " out of range");
      if (seen[b]++ != 0) {
        throw ProtocolError("bank " + std::to_string(b) + " linked to more than one port in one slot");
      }
    }
  }
}

}  // namespace

bool SlotAssignment::empty() const noexcept {
  for (const auto& [p, s] : input_links)
    if (!s.empty()) return false;
  for (const auto& [p, s] : output_links)
    if (!s.empty()) return false;
  return true;
}

void validate(const SlotAssignment& assignment, const SwitchConfig& config) {
  std::vector<int> seen(config.num_banks, 0);
  check_links(assignment.input_links, config.num_inputs, "input", config, seen);
  check_links(assignment.output_links, config.num_outputs, "output", config, seen);
}

std::vector<BankState> apply_assignment(std::span<const BankState> banks, const SlotAssignment& assignment,
                                        const SwitchConfig& config) {
  validate(assignment, config);
  require(banks.size() == config.num_banks, "apply_assignment: bank list does not match num_banks");
  std::vector<BankState> out(banks.begin(), banks.end());
  for (auto& b : out) b.connection = Idle{};
  for (const auto& [port, ids] : assignment.input_links)
    for (BankId b : ids) out[b].connection = Charging{port};
  for (const auto& [port, ids] : assignment.output_links)
    for (BankId b : ids) out[b].connection = Discharging{port};
  return out;
}

}  // namespace eps::core
