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
#include <memory>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "eps/physics/capacitor.hpp"
#include "eps/protocol/diagnostics.hpp"

namespace eps::protocol {

enum class LoadPhase { idle, requested, granted, receiving };

std::string_view to_string(LoadPhase phase) noexcept;

/// What the machine can see of the world when it steps.
struct LoadObservation {
  std::uint64_t slot = 0;
  physics::Capacitor receiver{1.0, 0.0};  // capacitor a transfer would land on
};

namespace load_event {
struct Demand {
  double joules = 0.0;
};
struct GrantReceived {
  GrantMsg grant;
};
struct SlotEnergyArrived {
  double joules = 0.0;
};
struct SlotTick {};
struct DemandWithdrawn {};
}  // namespace load_event

using LoadEvent = std::variant<load_event::Demand, load_event::GrantReceived, load_event::SlotEnergyArrived,
                               load_event::SlotTick, load_event::DemandWithdrawn>;

struct LoadMachineConfig {
  Address self;
  Address upstream;              // where requests go
  std::uint64_t timeout_slots = 6;  // re-request if no grant within this many slots
  double tolerance = 1e-9;       // J
  double min_remainder = 1e-3;   // J, smaller leftovers count as served
  /// Shared by machines that speak for one address, so its request ids
  /// keep increasing. Null: the machine counts on its own.
  std::shared_ptr<std::uint64_t> id_counter;
  /// False: demand left over when a grant closes or a request times out is
  /// dropped instead of re-requested.
  bool reissue_remainder = true;
};

struct LoadStepOutput {
  std::optional<RequestMsg> request;
  std::vector<Diagnostic> diagnostics;
};

/// Requesting side of the protocol: idle -> requested -> granted ->
/// receiving -> idle. Any demand left over when a grant closes is
/// re-requested on the next tick unless the config says otherwise.
class LoadMachine {
 public:
  explicit LoadMachine(LoadMachineConfig config);

  LoadStepOutput step(const LoadEvent& event, const LoadObservation& obs);

  LoadPhase phase() const noexcept { return phase_; }
  const LoadMachineConfig& config() const noexcept { return config_; }
  /// J demanded and not yet delivered.
  double outstanding_demand() const noexcept { return outstanding_; }
  /// J still owed on the current grant.
  double ledger() const noexcept { return ledger_; }
  const std::optional<GrantMsg>& grant() const noexcept { return grant_; }
  std::optional<std::uint64_t> pending_request_id() const noexcept;

  /// Whether energy for `request_id` may land in `slot`.
  bool accepts_energy(std::uint64_t slot, std::uint64_t request_id) const noexcept;

  double total_requested() const noexcept { return total_requested_; }
  double total_granted() const noexcept { return total_granted_; }
  double total_delivered() const noexcept { return total_delivered_; }

 private:
  LoadStepOutput on(const load_event::Demand& e, const LoadObservation& obs);
  LoadStepOutput on(const load_event::GrantReceived& e, const LoadObservation& obs);
  LoadStepOutput on(const load_event::SlotEnergyArrived& e, const LoadObservation& obs);
  LoadStepOutput on(const load_event::SlotTick& e, const LoadObservation& obs);
  LoadStepOutput on(const load_event::DemandWithdrawn& e, const LoadObservation& obs);

  RequestMsg issue_request(const LoadObservation& obs);
  void close_round();
  Diagnostic diag(DiagnosticKind kind, std::uint64_t id, double value) const;

  LoadMachineConfig config_;
  LoadPhase phase_ = LoadPhase::idle;
  double outstanding_ = 0.0;
  double ledger_ = 0.0;
  std::uint64_t next_id_ = 1;
  std::uint64_t current_id_ = 0;  // last request issued
  std::uint64_t sent_slot_ = 0;
  std::optional<GrantMsg> grant_;
  double total_requested_ = 0.0;
  double total_granted_ = 0.0;
  double total_delivered_ = 0.0;
};

}  // namespace eps::protocol
