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

#include "eps/protocol/source_machine.hpp"

#include <algorithm>
#include <cmath>

#include "eps/error.hpp"

namespace eps::protocol {

std::string_view to_string(SourcePhase phase) noexcept {
  switch (phase) {
    case SourcePhase::listening: return "listening";
    case SourcePhase::granting: return "granting";
    case SourcePhase::supplying: return "supplying";
  }
  return "?";
}

FeederCapacity::FeederCapacity(double joules_per_slot) : cap_(joules_per_slot) {
  require(std::isfinite(joules_per_slot) && joules_per_slot > 0.0, "feeder capacity must be positive");
}

Offer FeederCapacity::offer(const RequestMsg& request, std::uint64_t target_slot) {
  if (!well_formed(request)) return {Offer::Decision::deny, 0.0};
  const double left = cap_ - committed(target_slot);
  if (!(left > 0.0)) return {Offer::Decision::defer, 0.0};
  return {Offer::Decision::grant, std::min(left, request.requested_energy)};
}

void FeederCapacity::commit(const RequestMsg&, std::uint64_t target_slot, double energy) {
  used_[target_slot] += energy;
}

void FeederCapacity::release_before(std::uint64_t slot) { used_.erase(used_.begin(), used_.lower_bound(slot)); }

double FeederCapacity::committed(std::uint64_t slot) const noexcept {
  const auto it = used_.find(slot);
  return it == used_.end() ? 0.0 : it->second;
}

std::uint64_t SourceMachineConfig::lead_for(Address grantee) const {
  const auto it = grant_lead.find(grantee);
  return it == grant_lead.end() ? default_grant_lead : it->second;
}

SourceMachine::SourceMachine(SourceMachineConfig config, std::unique_ptr<CapacityModel> capacity)
    : config_(std::move(config)), capacity_(std::move(capacity)) {
  require(capacity_ != nullptr, "capacity model required");
}

SourceStepOutput SourceMachine::step(const SourceEvent& event, std::uint64_t slot) {
  return std::visit([&](const auto& e) { return on(e, slot); }, event);
}

SourcePhase SourceMachine::phase() const noexcept {
  if (!active_.empty()) return SourcePhase::supplying;
  if (!queue_.empty()) return SourcePhase::granting;
  return SourcePhase::listening;
}

Diagnostic SourceMachine::diag(DiagnosticKind kind, const RequestMsg& r, double value) const {
  return Diagnostic{kind, config_.self, r.requester, r.request_id, value};
}

GrantMsg SourceMachine::make_grant(const RequestMsg& r, double energy, std::uint64_t slot) const {
  return GrantMsg{config_.self, r.requester, r.request_id, energy, slot + config_.lead_for(r.requester), 1};
}

SourceStepOutput SourceMachine::on(const source_event::RequestReceived& e, std::uint64_t slot) {
  SourceStepOutput out;
  const RequestMsg& r = e.request;
  const auto last = last_id_.find(r.requester);
  if (last != last_id_.end() && r.request_id <= last->second) {
    out.diagnostics.push_back(diag(DiagnosticKind::duplicate_request, r, r.requested_energy));
    return out;
  }
  last_id_[r.requester] = r.request_id;

  const auto queued = std::find_if(queue_.begin(), queue_.end(),
                                   [&](const Queued& q) { return q.request.requester == r.requester; });
  if (!well_formed(r)) {
    out.diagnostics.push_back(diag(DiagnosticKind::malformed_request, r, r.requested_energy));
    out.grants.push_back(make_grant(r, 0.0, slot));
    return out;
  }
  if (queued != queue_.end()) {
    out.diagnostics.push_back(diag(DiagnosticKind::superseded_request, queued->request, queued->request.requested_energy));
    queued->request = r;  // keeps its place in line
  } else {
    queue_.push_back({r, next_seq_++});
  }
  return out;
}

SourceStepOutput SourceMachine::on(const source_event::SlotTick&, std::uint64_t slot) {
  SourceStepOutput out;
  std::erase_if(active_, [&](const SupplyDirective& d) { return d.slot < slot; });
  capacity_->release_before(slot);

  std::stable_sort(queue_.begin(), queue_.end(), [](const Queued& a, const Queued& b) {
    if (a.request.requested_energy != b.request.requested_energy)
      return a.request.requested_energy > b.request.requested_energy;
    return a.seq < b.seq;
  });
  std::vector<Queued> kept;
  for (const Queued& q : queue_) {
    const RequestMsg& r = q.request;
    const std::uint64_t target = slot + config_.lead_for(r.requester);
    const Offer offer = capacity_->offer(r, target);
    if (offer.decision == Offer::Decision::deny) {
      out.diagnostics.push_back(diag(DiagnosticKind::request_denied, r, r.requested_energy));
      out.grants.push_back(make_grant(r, 0.0, slot));
      continue;
    }
    const double energy = std::min(offer.energy, r.requested_energy);
    const bool crumb = energy < r.requested_energy && energy < config_.min_partial_grant;
    if (offer.decision == Offer::Decision::defer || !(energy > config_.tolerance) || crumb) {
      kept.push_back(q);
      continue;
    }
    capacity_->commit(r, target, energy);
    out.grants.push_back(make_grant(r, energy, slot));
    SupplyDirective d{r.requester, r.request_id, target, energy,
                      physics::Capacitor(r.load_capacitance, r.load_voltage)};
    out.directives.push_back(d);
    active_.push_back(d);
  }
  queue_ = std::move(kept);
  std::stable_sort(queue_.begin(), queue_.end(), [](const Queued& a, const Queued& b) { return a.seq < b.seq; });
  return out;
}

SourceStepOutput SourceMachine::on(const source_event::SupplyComplete& e, std::uint64_t) {
  std::erase_if(active_,
                [&](const SupplyDirective& d) { return d.grantee == e.grantee && d.request_id == e.request_id; });
  return {};
}

}  // namespace eps::protocol
