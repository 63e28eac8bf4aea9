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

#include "eps/sim/engine.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>

#include "eps/core/scheduler.hpp"
#include "eps/error.hpp"
#include "eps/protocol/switch_machine.hpp"
#include "eps/sim/network.hpp"

namespace eps::sim {
namespace {

using protocol::Message;

struct LoadEntity {
  LoadSpec spec;
  core::PortId port;
  protocol::LoadMachine machine;
  core::LoadInterface iface;
  std::size_t next_demand = 0;
  double supplied = 0.0;
  double dissipated = 0.0;
};

struct SourceEntity {
  SourceSpec spec;
  core::PortId port;
  protocol::SourceMachine machine;
  double granted = 0.0;
  double supplied = 0.0;
  double dissipated = 0.0;
};

enum class Kind { source, switch_, load };

core::LoadInterface make_interface(const LoadSpec& l) {
  const physics::Capacitor ci(l.capacitance, l.initial_voltage);
  const physics::Capacitor cl(l.load_capacitance.value_or(l.capacitance), 0.0);
  if (l.mode == core::InterfaceMode::half_cycle) return core::LoadInterface::half_cycle(ci, cl);
  return core::LoadInterface::full_cycle(ci, ci, cl);
}

// Expected round trip (request out, grant back) plus a fixed grace period.
constexpr std::uint64_t kTimeoutGraceSlots = 4;

std::uint64_t timeout_for(const NetworkModel& net, Address a, Address b) {
  return net.latency(a, b) + net.latency(b, a) + 2 + kTimeoutGraceSlots;
}

template <typename T>
std::vector<T> sorted_by_address(std::vector<T> v) {
  std::sort(v.begin(), v.end(), [](const T& a, const T& b) { return a.address < b.address; });
  return v;
}

class Engine {
 public:
  explicit Engine(const ScenarioConfig& s)
      : scenario_(s),
        net_(s.network, s.run.rng_seed),
        switch_(make_switch(s, net_)),
        banks_(core::make_banks(s.switch_config, s.bank_voltage_at_start())) {
    const Address sw = s.switch_address;
    core::PortId port = 0;
    for (const auto& spec : sorted_by_address(s.sources)) {
      protocol::SourceMachineConfig cfg;
      cfg.self = spec.address;
      cfg.grant_lead[sw] = net_.latency(spec.address, sw) + 1;
      sources_.push_back({spec, port++,
                          protocol::SourceMachine(cfg, std::make_unique<protocol::FeederCapacity>(spec.feeder_capacity))});
    }
    port = 0;
    for (const auto& spec : sorted_by_address(s.loads)) {
      protocol::LoadMachineConfig cfg;
      cfg.self = spec.address;
      cfg.upstream = sw;
      cfg.timeout_slots = timeout_for(net_, spec.address, sw);
      loads_.push_back({spec, port++, protocol::LoadMachine(cfg), make_interface(spec)});
    }
    for (std::size_t i = 0; i < sources_.size(); ++i) order_.push_back({sources_[i].spec.address, Kind::source, i});
    for (std::size_t i = 0; i < loads_.size(); ++i) order_.push_back({loads_[i].spec.address, Kind::load, i});
    order_.push_back({sw, Kind::switch_, 0});
    std::sort(order_.begin(), order_.end(), [](const auto& a, const auto& b) { return a.address < b.address; });

    trace_.bank_capacitance = s.switch_config.bank_capacitance;
    trace_.max_bank_voltage = s.switch_config.max_bank_voltage;
    for (const auto& b : banks_) trace_.initial_bank_voltages.push_back(b.capacitor.voltage());
    for (const auto& src : sources_) trace_.input_ports[src.port] = src.spec.address;
    for (const auto& l : loads_) trace_.output_ports[l.port] = l.spec.address;
    busy_.assign(banks_.size(), 0);
  }

  RunResult run(const RunOptions& options) {
    for (std::uint64_t s = 0; s < scenario_.run.total_slots; ++s) {
      deliver_messages(s);
      step_entities(s);
      const auto plan = schedule(s);
      move_energy(s, plan);
    }
    RunResult out;
    out.trace = std::move(trace_);
    out.metrics = collect_metrics();
    if (options.before_audit) options.before_audit(out.trace);
    out.audit = global_energy_audit(out.trace);
    return out;
  }

 private:
  struct Entry {
    Address address;
    Kind kind;
    std::size_t index;
  };

  struct Plan {
    core::SlotAssignment assignment;
    std::map<core::PortId, std::uint64_t> output_request;  // port -> request id served
    std::map<core::PortId, std::uint64_t> input_request;
    std::map<core::PortId, core::InputSupply> input_supply;  // stiff, capped at the grant
  };

  static protocol::SwitchMachine make_switch(const ScenarioConfig& s, const NetworkModel& net) {
    protocol::SwitchMachineConfig cfg;
    cfg.self = s.switch_address;
    cfg.banks = s.switch_config;
    cfg.low_water = s.low_water;
    for (const auto& src : s.sources)
      cfg.upstream.push_back({src.address, src.feeder_capacity, timeout_for(net, s.switch_address, src.address)});
    for (const auto& l : s.loads) cfg.grant_lead[l.address] = net.latency(s.switch_address, l.address) + 1;
    return protocol::SwitchMachine(cfg);
  }

  void note(std::uint64_t s, const std::vector<protocol::Diagnostic>& diags) {
    for (const auto& d : diags) trace_.records.push_back(DiagnosticRecord{s, d});
  }

  void send(std::uint64_t s, const Message& m) {
    const auto sent = net_.send(s, m);
    trace_.records.push_back(MessageRecord{s, sent.lost ? Direction::drop : Direction::send, protocol::sender(m), m});
    if (const auto* r = std::get_if<protocol::RequestMsg>(&m)) request_sent_[{r->requester, r->request_id}] = s;
  }

  void absorb(std::uint64_t s, protocol::LoadStepOutput&& out) {
    if (out.request) send(s, *out.request);
    note(s, out.diagnostics);
  }

  void deliver_messages(std::uint64_t s) {
    inbox_.clear();
    for (auto& m : net_.deliver(s)) {
      const Address to = protocol::recipient(m);
      trace_.records.push_back(MessageRecord{s, Direction::recv, to, m});
      inbox_[to].push_back(std::move(m));
    }
  }

  void step_entities(std::uint64_t s) {
    for (const Entry& e : order_) {
      const auto& inbox = inbox_[e.address];
      switch (e.kind) {
        case Kind::load: {
          auto& l = loads_[e.index];
          const protocol::LoadObservation obs{s, l.iface.receiver()};
          for (const auto& m : inbox)
            if (const auto* g = std::get_if<protocol::GrantMsg>(&m))
              absorb(s, l.machine.step(protocol::load_event::GrantReceived{*g}, obs));
          const auto& demands = l.spec.demands;
          while (l.next_demand < demands.size() && demands[l.next_demand].slot <= s)
            absorb(s, l.machine.step(protocol::load_event::Demand{demands[l.next_demand++].joules}, obs));
          absorb(s, l.machine.step(protocol::load_event::SlotTick{}, obs));
          break;
        }
        case Kind::source: {
          auto& src = sources_[e.index];
          for (const auto& m : inbox)
            if (const auto* r = std::get_if<protocol::RequestMsg>(&m)) {
              auto out = src.machine.step(protocol::source_event::RequestReceived{*r}, s);
              for (const auto& g : out.grants) send(s, g);
              note(s, out.diagnostics);
            }
          auto out = src.machine.step(protocol::source_event::SlotTick{}, s);
          for (const auto& g : out.grants) {
            src.granted += g.granted_energy;
            send(s, g);
          }
          note(s, out.diagnostics);
          break;
        }
        case Kind::switch_: {
          auto out = switch_.step({s, banks_}, inbox);
          for (const auto& m : out.outbound) send(s, m);
          note(s, out.diagnostics);
          break;
        }
      }
    }
  }

  Plan schedule(std::uint64_t s) {
    Plan plan;
    std::vector<core::PendingGrant> grants;
    std::uint64_t arrival = 0;
    for (const auto& r : switch_.inventory().reservations_for(s)) {
      const auto it = std::find_if(loads_.begin(), loads_.end(),
                                   [&](const LoadEntity& l) { return l.spec.address == r.grantee; });
      if (it == loads_.end() || !it->machine.accepts_energy(s, r.request_id)) {
        trace_.records.push_back(GatedRecord{s, r.grantee, r.request_id});
        switch_.inventory().release(r.grantee, r.request_id);
        continue;
      }
      grants.push_back({it->port, r.energy, it->iface.receiver(), arrival++, r.banks});
      plan.output_request[it->port] = r.request_id;
    }
    std::vector<core::PendingRecharge> recharges;
    for (const auto& src : sources_) {
      for (const auto& d : src.machine.active()) {
        if (d.slot != s || d.grantee != scenario_.switch_address) continue;
        const auto* up = switch_.upstream(src.spec.address);
        if (!up || !up->accepts_energy(s, d.request_id)) {
          trace_.records.push_back(GatedRecord{s, d.grantee, d.request_id});
          continue;
        }
        auto supply = core::InputSupply::stiff(src.spec.voltage);
        supply.max_gain = d.energy;
        recharges.push_back({src.port, supply, d.energy});
        plan.input_supply[src.port] = supply;
        plan.input_request[src.port] = d.request_id;
      }
    }
    if (!grants.empty() || !recharges.empty())
      plan.assignment = scheduler_.schedule(s, grants, recharges, banks_, scenario_.switch_config);
    plan.assignment.slot = s;
    return plan;
  }

  void move_energy(std::uint64_t s, const Plan& plan) {
    std::optional<core::TransferReport> report;
    if (!plan.assignment.empty()) {
      trace_.records.push_back(AssignmentRecord{plan.assignment});
      const auto wired = core::apply_assignment(banks_, plan.assignment, scenario_.switch_config);
      std::map<core::PortId, core::InputSupply> supplies;
      for (const auto& [port, ids] : plan.assignment.input_links) supplies[port] = plan.input_supply.at(port);
      std::map<core::PortId, core::LoadInterface> outputs;
      for (const auto& [port, ids] : plan.assignment.output_links) outputs.emplace(port, loads_[port].iface);
      report = core::execute_slot_transfers(wired, plan.assignment, scenario_.switch_config, supplies, outputs);

      for (const auto& row : report->rows) {
        const Address who = row.port_kind == core::PortKind::input ? sources_[row.port_id].spec.address
                                                                   : loads_[row.port_id].spec.address;
        trace_.records.push_back(TransferRecord{row, who});
      }
      banks_ = core::apply_assignment(report->banks, core::SlotAssignment{}, scenario_.switch_config);
      BankRecord snap{s, {}};
      for (const auto& b : banks_) snap.voltages.push_back(b.capacitor.voltage());
      trace_.records.push_back(std::move(snap));
      for (const auto& [port, ids] : plan.assignment.input_links)
        for (auto id : ids) ++busy_[id];
      for (const auto& [port, ids] : plan.assignment.output_links)
        for (auto id : ids) ++busy_[id];

      for (const auto& row : report->rows) {
        if (row.port_kind == core::PortKind::output) {
          auto& l = loads_[row.port_id];
          l.dissipated += row.dissipated_J;
          absorb(s, l.machine.step(protocol::load_event::SlotEnergyArrived{row.energy_J}, {s, l.iface.receiver()}));
          const auto sent = request_sent_.find({l.spec.address, plan.output_request.at(row.port_id)});
          if (sent != request_sent_.end()) ++latency_[s - sent->second];
        } else {
          auto& src = sources_[row.port_id];
          src.supplied += row.energy_J;
          src.dissipated += row.dissipated_J;
          note(s, switch_.record_recharge(src.spec.address, row.bank_energy_change(), {s, banks_}));
          src.machine.step(protocol::source_event::SupplyComplete{scenario_.switch_address,
                                                                  plan.input_request.at(row.port_id)},
                           s);
        }
      }
    }

    for (auto& l : loads_) {
      std::optional<core::InterfaceDelivery> incoming;
      if (report) {
        const auto it = report->deliveries.find(l.port);
        if (it != report->deliveries.end()) incoming = it->second;
      }
      const bool hold = l.machine.phase() != protocol::LoadPhase::idle;
      const auto step = l.iface.mode() == core::InterfaceMode::full_cycle
                            ? core::step_full_cycle_interface(l.iface, incoming)
                            : core::step_half_cycle_interface(l.iface, incoming, hold);
      l.iface = step.interface;
      l.supplied += step.energy_to_load;
      l.dissipated += step.energy_dissipated;
      if (incoming || step.energy_to_load > 0.0 || step.energy_dissipated > 0.0) {
        InterfaceRecord rec{s, l.spec.address, {}, l.iface.load_capacitor().voltage(), step.energy_to_load,
                            step.energy_dissipated};
        for (const auto& c : l.iface.interface_caps()) rec.interface_voltages.push_back(c.voltage());
        trace_.records.push_back(std::move(rec));
      }
    }
  }

  Metrics collect_metrics() const {
    Metrics m;
    m.total_slots = scenario_.run.total_slots;
    m.bank_busy_slots = busy_;
    m.latency_histogram = latency_;
    for (const auto& src : sources_) {
      EntityMetrics e{src.spec.address, "source"};
      e.energy_granted = src.granted;
      e.energy_supplied = src.supplied;
      e.energy_dissipated = src.dissipated;
      m.entities.push_back(e);
    }
    EntityMetrics sw{scenario_.switch_address, "switch"};
    for (const auto& [addr, up] : switch_.upstream_machines()) {
      sw.energy_requested += up.total_requested();
      sw.energy_granted += up.total_granted();
      sw.energy_delivered += up.total_delivered();
    }
    for (const auto& l : loads_) {
      EntityMetrics e{l.spec.address, "load"};
      e.energy_requested = l.machine.total_requested();
      e.energy_granted = l.machine.total_granted();
      e.energy_delivered = l.machine.total_delivered();
      e.energy_supplied = l.supplied;
      e.energy_dissipated = l.dissipated;
      sw.energy_supplied += e.energy_delivered;
      m.entities.push_back(e);
    }
    m.entities.push_back(sw);
    std::sort(m.entities.begin(), m.entities.end(),
              [](const EntityMetrics& a, const EntityMetrics& b) { return a.address < b.address; });
    return m;
  }

  const ScenarioConfig& scenario_;
  NetworkModel net_;
  protocol::SwitchMachine switch_;
  std::vector<core::BankState> banks_;
  std::vector<SourceEntity> sources_;
  std::vector<LoadEntity> loads_;
  std::vector<Entry> order_;
  core::FifoScheduler scheduler_;
  std::map<Address, std::vector<Message>> inbox_;
  std::map<std::pair<Address, std::uint64_t>, std::uint64_t> request_sent_;
  std::map<std::uint64_t, std::uint64_t> latency_;
  std::vector<std::uint64_t> busy_;
  SimulationTrace trace_;
};

}  // namespace

RunResult run(const ScenarioConfig& scenario, const RunOptions& options) {
  validate(scenario);
  return Engine(scenario).run(options);
}

bool tamper_transfer(SimulationTrace& trace, std::uint64_t slot, double joules) {
  for (auto& r : trace.records) {
    if (auto* t = std::get_if<TransferRecord>(&r); t && t->row.slot == slot) {
      t->row.energy_J += joules;
      return true;
    }
  }
  return false;
}

std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, auto&& writer) {
    const auto path = dir / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    writer(os);
    if (!os) throw std::runtime_error("write failed: " + path.string());
    written.push_back(path);
  };
  emit("trace.log", [&](std::ostream& os) { write_trace(os, result.trace); });
  emit("protocol.log", [&](std::ostream& os) { write_protocol_log(os, result.trace); });
  emit("transfers.csv", [&](std::ostream& os) { write_transfers_csv(os, result.trace); });
  emit("metrics.csv", [&](std::ostream& os) { write_metrics_csv(os, result.metrics); });
  emit("bank_utilization.csv", [&](std::ostream& os) { write_bank_utilization_csv(os, result.metrics); });
  emit("latency.csv", [&](std::ostream& os) { write_latency_csv(os, result.metrics); });
  emit("audit.csv", [&](std::ostream& os) { write_audit_csv(os, result.audit); });
  return written;
}

}  // namespace eps::sim
