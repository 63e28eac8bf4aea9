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
#include <optional>
#include <span>
#include <vector>

#include "eps/core/bank.hpp"
#include "eps/protocol/load_machine.hpp"
#include "eps/protocol/source_machine.hpp"

namespace eps::protocol {

/// Grants downstream energy from the switch's own banks. Granting reserves
/// specific full banks for the target slot; reservations lapse once the
/// slot has passed.
class BankInventoryCapacity final : public CapacityModel {
 public:
  struct Reservation {
    std::uint64_t slot = 0;
    Address grantee;
    std::uint64_t request_id = 0;
    double energy = 0.0;
    std::vector<core::BankId> banks;
  };

  explicit BankInventoryCapacity(core::SwitchConfig config);

  /// Current bank states; must be called before offer() in a slot.
  void observe(std::span<const core::BankState> banks);

  Offer offer(const RequestMsg& request, std::uint64_t target_slot) override;
  void commit(const RequestMsg& request, std::uint64_t target_slot, double energy) override;
  void release_before(std::uint64_t slot) override;

  const std::vector<Reservation>& reservations() const noexcept { return reservations_; }
  std::vector<Reservation> reservations_for(std::uint64_t slot) const;
  void release(Address grantee, std::uint64_t request_id);

 private:
  struct Pick {
    Address requester;
    std::uint64_t request_id = 0;
    std::vector<core::BankId> banks;
  };

  core::SwitchConfig config_;
  std::vector<core::BankState> banks_;
  std::vector<Reservation> reservations_;
  std::optional<Pick> pick_;
};

struct UpstreamLink {
  Address source;
  double feeder_capacity = 0.0;  // J per slot
  std::uint64_t timeout_slots = 6;
};

struct SwitchMachineConfig {
  Address self;
  core::SwitchConfig banks;
  double low_water = 0.5;  // fraction of full stored energy
  std::vector<UpstreamLink> upstream;
  std::uint64_t default_grant_lead = 1;
  std::map<Address, std::uint64_t> grant_lead;
  double tolerance = 1e-9;
  double min_request = 1e-3;  // J, smaller bank deficits are not refilled
};

struct SwitchObservation {
  std::uint64_t slot = 0;
  std::span<const core::BankState> banks;
};

struct SwitchStepOutput {
  std::vector<Message> outbound;
  std::vector<Diagnostic> diagnostics;
};

/// Load toward its sources and source toward its loads; the two halves
/// share only the bank inventory. Below the low-water mark the deficit is
/// requested from the sources in address order, each share capped by that
/// source's feeder capacity.
class SwitchMachine {
 public:
  explicit SwitchMachine(SwitchMachineConfig config);

  SwitchStepOutput step(const SwitchObservation& obs, std::span<const Message> inbox);

  /// Energy that arrived into the banks from `source` this slot.
  std::vector<Diagnostic> record_recharge(Address source, double joules, const SwitchObservation& obs);

  const SwitchMachineConfig& config() const noexcept { return config_; }
  const SourceMachine& downstream() const noexcept { return downstream_; }
  SourceMachine& downstream() noexcept { return downstream_; }
  const BankInventoryCapacity& inventory() const noexcept { return *inventory_; }
  BankInventoryCapacity& inventory() noexcept { return *inventory_; }
  const LoadMachine* upstream(Address source) const;
  const std::map<Address, LoadMachine>& upstream_machines() const noexcept { return upstream_; }

  /// The aggregate the sources see: all k banks as one capacitor holding
  /// the same energy.
  static physics::Capacitor aggregate(std::span<const core::BankState> banks, const core::SwitchConfig& config);

 private:
  SwitchMachineConfig config_;
  BankInventoryCapacity* inventory_;  // owned by downstream_
  SourceMachine downstream_;
  std::map<Address, LoadMachine> upstream_;
  bool refilling_ = false;
};

}  // namespace eps::protocol
