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

#include "eps/protocol/load_machine.hpp"

#include <algorithm>
#include <cmath>

#include "eps/error.hpp"

namespace eps::protocol {

std::string_view to_string(LoadPhase phase) noexcept {
  switch (phase) {
    case LoadPhase::idle: return "idle";
    case LoadPhase::requested: return "requested";
    case LoadPhase::granted: return "granted";
    case LoadPhase::receiving: return "receiving";
  }
  return "?";
}

LoadMachine::LoadMachine(LoadMachineConfig config) : config_(config) {
  require(config_.timeout_slots > 0, "timeout_slots must be positive");
  require(config_.tolerance >= 0.0, "tolerance must be non-negative");
  require(config_.min_remainder >= 0.0, "min_remainder must be non-negative");
}

LoadStepOutput LoadMachine::step(const LoadEvent& event, const LoadObservation& obs) {
  return std::visit([&](const auto& e) { return on(e, obs); }, event);
}

std::optional<std::uint64_t> LoadMachine::pending_request_id() const noexcept {
  if (phase_ == LoadPhase::requested) return current_id_;
  return std::nullopt;
}

bool LoadMachine::accepts_energy(std::uint64_t slot, std::uint64_t request_id) const noexcept {
  if (phase_ != LoadPhase::granted && phase_ != LoadPhase::receiving) return false;
  if (!grant_ || grant_->request_id != request_id) return false;
  return slot >= grant_->start_slot && slot - grant_->start_slot < grant_->slot_count;
}

Diagnostic LoadMachine::diag(DiagnosticKind kind, std::uint64_t id, double value) const {
  return Diagnostic{kind, config_.self, config_.upstream, id, value};
}

RequestMsg LoadMachine::issue_request(const LoadObservation& obs) {
  current_id_ = config_.id_counter ? ++*config_.id_counter : next_id_++;
  sent_slot_ = obs.slot;
  phase_ = LoadPhase::requested;
  return RequestMsg{config_.self,
                    config_.upstream,
                    outstanding_,
                    obs.receiver.capacitance(),
                    obs.receiver.voltage(),
                    current_id_};
}

void LoadMachine::close_round() {
  if (!config_.reissue_remainder || outstanding_ < config_.min_remainder) outstanding_ = 0.0;
}

LoadStepOutput LoadMachine::on(const load_event::Demand& e, const LoadObservation& obs) {
  require(std::isfinite(e.joules) && e.joules > 0.0, "demand must be positive");
  LoadStepOutput out;
  outstanding_ += e.joules;
  total_requested_ += e.joules;
  if (phase_ == LoadPhase::idle) out.request = issue_request(obs);
  return out;
}

LoadStepOutput LoadMachine::on(const load_event::GrantReceived& e, const LoadObservation&) {
  LoadStepOutput out;
  const GrantMsg& g = e.grant;
  if (phase_ != LoadPhase::requested || g.request_id != current_id_) {
    out.diagnostics.push_back(diag(DiagnosticKind::unknown_grant, g.request_id, g.granted_energy));
    return out;
  }
  if (!(g.granted_energy > 0.0)) {
    out.diagnostics.push_back(diag(DiagnosticKind::request_denied, g.request_id, outstanding_));
    outstanding_ = 0.0;
    phase_ = LoadPhase::idle;
    return out;
  }
  grant_ = g;
  ledger_ = g.granted_energy;
  total_granted_ += g.granted_energy;
  phase_ = LoadPhase::granted;
  return out;
}

LoadStepOutput LoadMachine::on(const load_event::SlotEnergyArrived& e, const LoadObservation&) {
  LoadStepOutput out;
  if (phase_ != LoadPhase::granted && phase_ != LoadPhase::receiving) {
    out.diagnostics.push_back(diag(DiagnosticKind::unsolicited_energy, current_id_, e.joules));
    return out;
  }
  total_delivered_ += e.joules;
  outstanding_ = std::max(0.0, outstanding_ - e.joules);
  ledger_ -= e.joules;
  if (ledger_ <= config_.tolerance) {
    if (-ledger_ > config_.tolerance)
      out.diagnostics.push_back(diag(DiagnosticKind::over_delivery, grant_->request_id, -ledger_));
    ledger_ = 0.0;
    phase_ = LoadPhase::idle;
    close_round();
  } else {
    phase_ = LoadPhase::receiving;
  }
  return out;
}

LoadStepOutput LoadMachine::on(const load_event::SlotTick&, const LoadObservation& obs) {
  LoadStepOutput out;
  switch (phase_) {
    case LoadPhase::granted:
    case LoadPhase::receiving:
      if (obs.slot - grant_->start_slot >= grant_->slot_count && obs.slot >= grant_->start_slot) {
        out.diagnostics.push_back(diag(DiagnosticKind::grant_shortfall, grant_->request_id, ledger_));
        ledger_ = 0.0;
        phase_ = LoadPhase::idle;
        close_round();
        return out;  // the interface settles for a slot before the next request
      }
      break;
    case LoadPhase::requested:
      if (obs.slot - sent_slot_ >= config_.timeout_slots) {
        out.diagnostics.push_back(diag(DiagnosticKind::request_timeout, current_id_, outstanding_));
        close_round();
        if (outstanding_ > config_.tolerance)
          out.request = issue_request(obs);
        else
          phase_ = LoadPhase::idle;
      }
      return out;
    case LoadPhase::idle:
      break;
  }
  if (phase_ == LoadPhase::idle && outstanding_ > config_.tolerance) out.request = issue_request(obs);
  return out;
}

LoadStepOutput LoadMachine::on(const load_event::DemandWithdrawn&, const LoadObservation&) {
  outstanding_ = 0.0;
  return {};
}

}  // namespace eps::protocol
