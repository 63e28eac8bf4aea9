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

#include "eps/protocol/switch_machine.hpp"

#include <algorithm>
#include <cmath>

#include "eps/core/bank_selection.hpp"
#include "eps/error.hpp"

namespace eps::protocol {

BankInventoryCapacity::BankInventoryCapacity(core::SwitchConfig config) : config_(config) { config_.validate(); }

void BankInventoryCapacity::observe(std::span<const core::BankState> banks) {
  banks_.assign(banks.begin(), banks.end());
  pick_.reset();
}

Offer BankInventoryCapacity::offer(const RequestMsg& request, std::uint64_t target_slot) {
  pick_.reset();
  if (!well_formed(request) || request.load_voltage >= config_.max_bank_voltage) return {Offer::Decision::deny, 0.0};
  for (const auto& r : reservations_)
    if (r.slot == target_slot && r.grantee == request.requester) return {Offer::Decision::defer, 0.0};

  std::vector<bool> candidate(banks_.size(), false);
  for (std::size_t i = 0; i < banks_.size(); ++i) candidate[i] = core::is_full(banks_[i], config_);
  for (const auto& r : reservations_)
    for (core::BankId id : r.banks)
      if (id < candidate.size()) candidate[id] = false;

  const physics::Capacitor receiver(request.load_capacitance, request.load_voltage);
  for (const auto& group : core::equal_voltage_groups(banks_, candidate, true)) {
    if (!(receiver.voltage() < group.voltage)) continue;
    const auto sel = core::select_bank_count(request.requested_energy, receiver, group.voltage,
                                             static_cast<unsigned>(group.ids.size()), config_.bank_capacitance);
    const double energy = sel.partial ? sel.predicted_delivered : request.requested_energy;
    pick_ = Pick{request.requester, request.request_id,
                 std::vector<core::BankId>(group.ids.begin(), group.ids.begin() + sel.n)};
    return {Offer::Decision::grant, energy};
  }
  return {Offer::Decision::defer, 0.0};
}

void BankInventoryCapacity::commit(const RequestMsg& request, std::uint64_t target_slot, double energy) {
  if (!pick_ || pick_->requester != request.requester || pick_->request_id != request.request_id)
    throw ProtocolError("commit without a matching offer");
  reservations_.push_back({target_slot, request.requester, request.request_id, energy, std::move(pick_->banks)});
  pick_.reset();
}

void BankInventoryCapacity::release_before(std::uint64_t slot) {
  std::erase_if(reservations_, [&](const Reservation& r) { return r.slot < slot; });
}

std::vector<BankInventoryCapacity::Reservation> BankInventoryCapacity::reservations_for(std::uint64_t slot) const {
  std::vector<Reservation> out;
  for (const auto& r : reservations_)
    if (r.slot == slot) out.push_back(r);
  return out;
}

void BankInventoryCapacity::release(Address grantee, std::uint64_t request_id) {
  std::erase_if(reservations_,
                [&](const Reservation& r) { return r.grantee == grantee && r.request_id == request_id; });
}

namespace {

std::unique_ptr<CapacityModel> make_inventory(const SwitchMachineConfig& config, BankInventoryCapacity*& raw) {
  auto inv = std::make_unique<BankInventoryCapacity>(config.banks);
  raw = inv.get();
  return inv;
}

SourceMachineConfig downstream_config(const SwitchMachineConfig& config) {
  return SourceMachineConfig{config.self, config.default_grant_lead, config.grant_lead, config.tolerance};
}

}  // namespace

SwitchMachine::SwitchMachine(SwitchMachineConfig config)
    : config_(std::move(config)),
      inventory_(nullptr),
      downstream_(downstream_config(config_), make_inventory(config_, inventory_)) {
  require(config_.low_water >= 0.0 && config_.low_water <= 1.0, "low_water must be in [0, 1]");
  auto ids = std::make_shared<std::uint64_t>(0);
  for (const auto& link : config_.upstream) {
    require(link.feeder_capacity > 0.0, "upstream feeder capacity must be positive");
    LoadMachineConfig lc;
    lc.self = config_.self;
    lc.upstream = link.source;
    lc.timeout_slots = link.timeout_slots;
    lc.tolerance = config_.tolerance;
    lc.id_counter = ids;
    lc.reissue_remainder = false;
    const bool fresh = upstream_.try_emplace(link.source, lc).second;
    require(fresh, "duplicate upstream source");
  }
  std::sort(config_.upstream.begin(), config_.upstream.end(),
            [](const UpstreamLink& a, const UpstreamLink& b) { return a.source < b.source; });
}

physics::Capacitor SwitchMachine::aggregate(std::span<const core::BankState> banks, const core::SwitchConfig& config) {
  const double c = static_cast<double>(banks.size()) * config.bank_capacitance;
  return physics::Capacitor(c, std::sqrt(2.0 * core::stored_energy(banks) / c));
}

const LoadMachine* SwitchMachine::upstream(Address source) const {
  const auto it = upstream_.find(source);
  return it == upstream_.end() ? nullptr : &it->second;
}

std::vector<Diagnostic> SwitchMachine::record_recharge(Address source, double joules, const SwitchObservation& obs) {
  const auto it = upstream_.find(source);
  if (it == upstream_.end()) throw ProtocolError("recharge from unknown source " + source.to_string());
  return it->second.step(load_event::SlotEnergyArrived{joules}, {obs.slot, aggregate(obs.banks, config_.banks)})
      .diagnostics;
}

SwitchStepOutput SwitchMachine::step(const SwitchObservation& obs, std::span<const Message> inbox) {
  SwitchStepOutput out;
  inventory_->observe(obs.banks);
  const LoadObservation as_load{obs.slot, aggregate(obs.banks, config_.banks)};

  auto absorb_source = [&](SourceStepOutput&& s) {
    for (auto& g : s.grants) out.outbound.emplace_back(g);
    for (auto& d : s.diagnostics) out.diagnostics.push_back(d);
  };
  auto absorb_load = [&](LoadStepOutput&& s) {
    if (s.request) out.outbound.emplace_back(*s.request);
    for (auto& d : s.diagnostics) out.diagnostics.push_back(d);
  };

  for (const Message& msg : inbox) {
    if (const auto* r = std::get_if<RequestMsg>(&msg)) {
      if (r->target == config_.self) absorb_source(downstream_.step(source_event::RequestReceived{*r}, obs.slot));
      continue;
    }
    const auto& g = std::get<GrantMsg>(msg);
    if (g.grantee != config_.self) continue;
    const auto it = upstream_.find(g.granter);
    if (it == upstream_.end()) {
      out.diagnostics.push_back({DiagnosticKind::unknown_grant, config_.self, g.granter, g.request_id, g.granted_energy});
      continue;
    }
    absorb_load(it->second.step(load_event::GrantReceived{g}, as_load));
  }

  // Upstream demand is recomputed from the deficit rather than carried over.
  bool all_idle = true;
  for (auto& [addr, m] : upstream_) {
    if (m.phase() == LoadPhase::idle && m.outstanding_demand() > 0.0) m.step(load_event::DemandWithdrawn{}, as_load);
    all_idle = all_idle && m.phase() == LoadPhase::idle;
  }
  // Below low water, or with nothing left to serve from, refill every
  // depleted bank before stopping.
  const auto& cfg = config_.banks;
  double deficit = 0.0;
  bool any_full = false;
  for (const auto& b : obs.banks) {
    if (core::is_full(b, cfg)) {
      any_full = true;
      continue;
    }
    const double v = b.capacitor.voltage();
    deficit += 0.5 * cfg.bank_capacitance * (cfg.rated_voltage - v) * (cfg.rated_voltage + v);
  }
  if (!(deficit > config_.min_request))
    refilling_ = false;
  else if (!any_full || core::stored_energy(obs.banks) < config_.low_water * cfg.full_energy() - config_.tolerance)
    refilling_ = true;
  if (all_idle && refilling_) {
    for (const auto& link : config_.upstream) {
      const double share = std::min(deficit, link.feeder_capacity);
      if (!(share > config_.min_request)) break;
      absorb_load(upstream_.at(link.source).step(load_event::Demand{share}, as_load));
      deficit -= share;
    }
  }
  for (auto& [addr, m] : upstream_) absorb_load(m.step(load_event::SlotTick{}, as_load));

  absorb_source(downstream_.step(source_event::SlotTick{}, obs.slot));
  return out;
}

}  // namespace eps::protocol
