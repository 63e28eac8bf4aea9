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
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include "eps/physics/capacitor.hpp"
#include "eps/protocol/diagnostics.hpp"

namespace eps::protocol {

enum class SourcePhase { listening, granting, supplying };

std::string_view to_string(SourcePhase phase) noexcept;

/// Tells the power plane to move `energy` J to `grantee` in `slot`.
struct SupplyDirective {
  Address grantee;
  std::uint64_t request_id = 0;
  std::uint64_t slot = 0;
  double energy = 0.0;
  physics::Capacitor receiver{1.0, 0.0};  // as reported in the request
};

struct Offer {
  enum class Decision { grant, defer, deny };
  Decision decision = Decision::defer;
  double energy = 0.0;  // J available to this request if granted
};

/// What a granter can promise for a given target slot.
class CapacityModel {
 public:
  virtual ~CapacityModel() = default;
  virtual Offer offer(const RequestMsg& request, std::uint64_t target_slot) = 0;
  /// Books `energy` J for the request in `target_slot`; called only after
  /// offer() returned grant for the same request.
  virtual void commit(const RequestMsg& request, std::uint64_t target_slot, double energy) = 0;
  /// Drops bookkeeping for slots before `slot`.
  virtual void release_before(std::uint64_t slot) = 0;
};

/// Fixed J-per-slot feeder cap.
class FeederCapacity final : public CapacityModel {
 public:
  explicit FeederCapacity(double joules_per_slot);

  Offer offer(const RequestMsg& request, std::uint64_t target_slot) override;
  void commit(const RequestMsg& request, std::uint64_t target_slot, double energy) override;
  void release_before(std::uint64_t slot) override;

  double cap() const noexcept { return cap_; }
  double committed(std::uint64_t slot) const noexcept;

 private:
  double cap_;
  std::map<std::uint64_t, double> used_;
};

namespace source_event {
struct RequestReceived {
  RequestMsg request;
};
struct SlotTick {};
struct SupplyComplete {
  Address grantee;
  std::uint64_t request_id = 0;
};
}  // namespace source_event

using SourceEvent = std::variant<source_event::RequestReceived, source_event::SlotTick, source_event::SupplyComplete>;

struct SourceMachineConfig {
  Address self;
  std::uint64_t default_grant_lead = 1;  // slots from grant issue to start_slot
  std::map<Address, std::uint64_t> grant_lead;  // per-grantee override
  double tolerance = 1e-9;
  double min_partial_grant = 1e-3;  // J, smaller partial offers wait in the queue

  std::uint64_t lead_for(Address grantee) const;
};

struct SourceStepOutput {
  std::vector<GrantMsg> grants;
  std::vector<SupplyDirective> directives;
  std::vector<Diagnostic> diagnostics;
};

/// Granting side of the protocol. Requests queue up; each tick grants the
/// largest remaining demand first (FIFO on ties) for as long as the
/// capacity model allows. Grants cover a single slot.
class SourceMachine {
 public:
  SourceMachine(SourceMachineConfig config, std::unique_ptr<CapacityModel> capacity);

  SourceStepOutput step(const SourceEvent& event, std::uint64_t slot);

  SourcePhase phase() const noexcept;
  const SourceMachineConfig& config() const noexcept { return config_; }
  std::size_t queued() const noexcept { return queue_.size(); }
  const std::vector<SupplyDirective>& active() const noexcept { return active_; }
  CapacityModel& capacity() noexcept { return *capacity_; }
  const CapacityModel& capacity() const noexcept { return *capacity_; }

 private:
  struct Queued {
    RequestMsg request;
    std::uint64_t seq;
  };

  SourceStepOutput on(const source_event::RequestReceived& e, std::uint64_t slot);
  SourceStepOutput on(const source_event::SlotTick& e, std::uint64_t slot);
  SourceStepOutput on(const source_event::SupplyComplete& e, std::uint64_t slot);

  Diagnostic diag(DiagnosticKind kind, const RequestMsg& r, double value) const;
  GrantMsg make_grant(const RequestMsg& r, double energy, std::uint64_t slot) const;

  SourceMachineConfig config_;
  std::unique_ptr<CapacityModel> capacity_;
  std::vector<Queued> queue_;
  std::vector<SupplyDirective> active_;
  std::map<Address, std::uint64_t> last_id_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace eps::protocol
