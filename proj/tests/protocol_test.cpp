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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <vector>

#include "doctest.h"
#include "eps/core/bank_selection.hpp"
#include "eps/protocol/codec.hpp"
#include "eps/protocol/switch_machine.hpp"
#include "support/oracles.hpp"

namespace proto = eps::protocol;
namespace core = eps::core;
namespace et = eps::testing;
using eps::physics::Capacitor;
using proto::Address;

namespace {

const Address kLoad = Address::of(10, 0, 2, 1);
const Address kSwitch = Address::of(10, 0, 1, 1);
const Address kSource = Address::of(10, 0, 0, 1);

proto::LoadObservation at(std::uint64_t slot, double volts = 0.0) { return {slot, Capacitor(1.0, volts)}; }

proto::RequestMsg request(Address from, double joules, std::uint64_t id, Address to = kSource) {
  return proto::RequestMsg{from, to, joules, 1.0, 0.0, id};
}

bool same_bits(const proto::Message& a, const proto::Message& b) {
  const auto ea = proto::encode(a), eb = proto::encode(b);
  return ea == eb && a.index() == b.index();
}

proto::Message random_message(et::SplitMix64& rng) {
  auto addr = [&] { return Address{static_cast<std::uint32_t>(rng.next())}; };
  // Arbitrary bit patterns, NaNs and infinities included.
  auto f64 = [&] { return rng.below(4) == 0 ? std::bit_cast<double>(rng.next()) : rng.uniform(-1e6, 1e6); };
  if (rng.below(2) == 0) return proto::RequestMsg{addr(), addr(), f64(), f64(), f64(), rng.next()};
  return proto::GrantMsg{addr(), addr(), rng.next(), f64(), rng.next(), rng.next()};
}

}  // namespace

TEST_SUITE("address") {
  TEST_CASE("dotted quad round trip") {
    CHECK(kLoad.to_string() == "10.0.2.1");
    CHECK(Address::parse("10.0.2.1") == kLoad);
    CHECK(Address::parse("255.255.255.255")->value == 0xFFFFFFFFu);
    CHECK(Address::parse("0.0.0.0")->value == 0u);
    for (const char* bad : {"", "1.2.3", "1.2.3.4.5", "256.0.0.1", "01.2.3.4", "1..2.3", "a.b.c.d", "1.2.3.4 "})
      CHECK_FALSE(Address::parse(bad).has_value());
    CHECK(Address::of(1, 2, 3, 4) < Address::of(1, 2, 3, 5));
  }
}

TEST_SUITE("codec") {
  TEST_CASE("fixed layout") {
    const proto::RequestMsg r{Address::of(1, 2, 3, 4), Address::of(5, 6, 7, 8), 18.0, 1.0, 0.0, 7};
    const auto bytes = proto::encode(r);
    REQUIRE(bytes.size() == proto::kEncodedSize);
    CHECK(bytes[0] == 0x01);
    CHECK(bytes[1] == 4);  // little-endian address
    CHECK(bytes[4] == 1);
    CHECK(bytes[5] == 8);
    // 18.0 = 0x4032000000000000
    CHECK(bytes[9 + 7] == 0x40);
    CHECK(bytes[9 + 6] == 0x32);
    CHECK(bytes[33] == 7);
    CHECK(proto::encode(proto::GrantMsg{})[0] == 0x02);
    CHECK(proto::encode(proto::GrantMsg{}).size() == proto::kEncodedSize);
  }

  TEST_CASE("randomized round trip is bit exact") {
    et::SplitMix64 rng(31337);
    for (int i = 0; i < 10000; ++i) {
      const auto m = random_message(rng);
      const auto bytes = proto::encode(m);
      REQUIRE(bytes.size() == proto::kEncodedSize);
      const auto back = proto::decode(bytes);
      REQUIRE(same_bits(m, back));
      if (const auto* r = std::get_if<proto::RequestMsg>(&m); r && !std::isnan(r->requested_energy) &&
                                                               !std::isnan(r->load_capacitance) &&
                                                               !std::isnan(r->load_voltage))
        REQUIRE(std::get<proto::RequestMsg>(back) == *r);
    }
  }

  TEST_CASE("rejections carry kind and position") {
    auto fails_with = [](std::vector<std::uint8_t> bytes, proto::DecodeErrorKind kind, std::size_t pos) {
      try {
        proto::decode(bytes);
      } catch (const proto::DecodeError& e) {
        return e.kind() == kind && e.position() == pos;
      }
      return false;
    };
    CHECK(fails_with({}, proto::DecodeErrorKind::truncated, 0));
    CHECK(fails_with({0xFF}, proto::DecodeErrorKind::unknown_type, 0));
    CHECK(fails_with({0x00, 1, 2}, proto::DecodeErrorKind::unknown_type, 0));
    const auto good = proto::encode(proto::GrantMsg{kSwitch, kLoad, 3, 18.0, 3, 1});
    for (std::size_t len = 1; len < good.size(); ++len)
      CHECK(fails_with({good.begin(), good.begin() + static_cast<long>(len)}, proto::DecodeErrorKind::truncated, len));
    auto longer = good;
    longer.push_back(0);
    CHECK(fails_with(longer, proto::DecodeErrorKind::trailing_bytes, proto::kEncodedSize));
  }

  TEST_CASE("rendering") {
    const proto::Message r = proto::RequestMsg{kLoad, kSwitch, 18.0, 1.0, 0.0, 1};
    CHECK(proto::render(r) == "request from=10.0.2.1 to=10.0.1.1 id=1 energy_J=18 load_C_F=1 load_V=0");
    const proto::Message g = proto::GrantMsg{kSwitch, kLoad, 1, 40.5, 3, 1};
    CHECK(proto::render(g) == "grant from=10.0.1.1 to=10.0.2.1 id=1 energy_J=40.5 start_slot=3 slot_count=1");
  }
}

proto::LoadMachineConfig load_config(std::uint64_t timeout = 6, bool reissue = true) {
  proto::LoadMachineConfig c;
  c.self = kLoad;
  c.upstream = kSwitch;
  c.timeout_slots = timeout;
  c.reissue_remainder = reissue;
  return c;
}

TEST_SUITE("load machine") {
  TEST_CASE("demand, grant, delivery") {
    proto::LoadMachine m(load_config());
    auto out = m.step(proto::load_event::Demand{40.0}, at(1));
    REQUIRE(out.request);
    CHECK(out.request->requested_energy == 40.0);
    CHECK(out.request->load_capacitance == 1.0);
    CHECK(out.request->load_voltage == 0.0);
    CHECK(out.request->request_id == 1);
    CHECK(m.phase() == proto::LoadPhase::requested);

    out = m.step(proto::load_event::GrantReceived{{kSwitch, kLoad, 1, 40.0, 3, 1}}, at(3));
    CHECK(m.phase() == proto::LoadPhase::granted);
    CHECK(m.ledger() == 40.0);
    CHECK(m.accepts_energy(3, 1));
    CHECK_FALSE(m.accepts_energy(4, 1));
    CHECK_FALSE(m.accepts_energy(3, 2));

    // Three 1 F banks at 12 V onto 1 F at 0 V deliver 40.5 J.
    const double delivered = eps::core::predicted_delivery(3, Capacitor(1, 0), 12.0, 1.0);
    out = m.step(proto::load_event::SlotEnergyArrived{delivered}, at(3));
    CHECK(m.phase() == proto::LoadPhase::idle);
    REQUIRE(out.diagnostics.size() == 1);
    CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::over_delivery);
    CHECK(out.diagnostics[0].value == doctest::Approx(0.5));
    // Excess stays under one bank's marginal contribution.
    const double quantum = delivered - eps::core::predicted_delivery(2, Capacitor(1, 0), 12.0, 1.0);
    CHECK(out.diagnostics[0].value < quantum);
    CHECK(m.outstanding_demand() == 0.0);
    CHECK_FALSE(m.step(proto::load_event::SlotTick{}, at(4)).request);
  }

  TEST_CASE("partial grant leads to a re-request of the remainder") {
    proto::LoadMachine m(load_config());
    m.step(proto::load_event::Demand{100.0}, at(0));
    m.step(proto::load_event::GrantReceived{{kSwitch, kLoad, 1, 56.0, 2, 1}}, at(2));
    m.step(proto::load_event::SlotEnergyArrived{56.0}, at(2));
    CHECK(m.phase() == proto::LoadPhase::idle);
    const auto out = m.step(proto::load_event::SlotTick{}, at(3, 4.0));
    REQUIRE(out.request);
    CHECK(out.request->requested_energy == doctest::Approx(44.0));
    CHECK(out.request->request_id == 2);
    CHECK(out.request->load_voltage == 4.0);
  }

  TEST_CASE("unknown grants are discarded") {
    proto::LoadMachine m(load_config());
    auto out = m.step(proto::load_event::GrantReceived{{kSwitch, kLoad, 9, 10.0, 1, 1}}, at(0));
    REQUIRE(out.diagnostics.size() == 1);
    CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::unknown_grant);
    CHECK(m.phase() == proto::LoadPhase::idle);
    m.step(proto::load_event::Demand{5.0}, at(0));
    out = m.step(proto::load_event::GrantReceived{{kSwitch, kLoad, 9, 10.0, 1, 1}}, at(0));
    CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::unknown_grant);
    CHECK(m.phase() == proto::LoadPhase::requested);
  }

  TEST_CASE("energy while idle is a violation") {
    proto::LoadMachine m(load_config());
    const auto out = m.step(proto::load_event::SlotEnergyArrived{3.0}, at(0));
    REQUIRE(out.diagnostics.size() == 1);
    CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::unsolicited_energy);
    CHECK(proto::is_violation(out.diagnostics[0].kind));
    CHECK(m.total_delivered() == 0.0);
  }

  TEST_CASE("timeout re-issues with a fresh id") {
    proto::LoadMachine m(load_config(6));
    m.step(proto::load_event::Demand{10.0}, at(2));
    CHECK_FALSE(m.step(proto::load_event::SlotTick{}, at(7)).request);
    const auto out = m.step(proto::load_event::SlotTick{}, at(8));
    REQUIRE(out.request);
    CHECK(out.request->request_id == 2);
    CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::request_timeout);
    // The old grant is now stale.
    const auto late = m.step(proto::load_event::GrantReceived{{kSwitch, kLoad, 1, 10.0, 9, 1}}, at(9));
    CHECK(late.diagnostics[0].kind == proto::DiagnosticKind::unknown_grant);
  }

  TEST_CASE("denial drops the demand") {
    proto::LoadMachine m(load_config());
    m.step(proto::load_event::Demand{10.0}, at(0));
    const auto out = m.step(proto::load_event::GrantReceived{{kSwitch, kLoad, 1, 0.0, 1, 1}}, at(1));
    CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::request_denied);
    CHECK(m.phase() == proto::LoadPhase::idle);
    CHECK_FALSE(m.step(proto::load_event::SlotTick{}, at(2)).request);
  }

  TEST_CASE("grant window closing short re-requests") {
    proto::LoadMachine m(load_config());
    m.step(proto::load_event::Demand{30.0}, at(0));
    m.step(proto::load_event::GrantReceived{{kSwitch, kLoad, 1, 30.0, 2, 1}}, at(2));
    m.step(proto::load_event::SlotEnergyArrived{20.0}, at(2));
    CHECK(m.phase() == proto::LoadPhase::receiving);
    const auto out = m.step(proto::load_event::SlotTick{}, at(3));
    CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::grant_shortfall);
    CHECK_FALSE(out.request);
    CHECK(m.phase() == proto::LoadPhase::idle);
    const auto next = m.step(proto::load_event::SlotTick{}, at(4));
    REQUIRE(next.request);
    CHECK(next.request->requested_energy == doctest::Approx(10.0));
  }

  TEST_CASE("leftover demand is dropped when reissue is off") {
    proto::LoadMachine m(load_config(6, false));
    m.step(proto::load_event::Demand{30.0}, at(0));
    m.step(proto::load_event::GrantReceived{{kSwitch, kLoad, 1, 30.0, 2, 1}}, at(2));
    m.step(proto::load_event::SlotEnergyArrived{20.0}, at(2));
    m.step(proto::load_event::SlotTick{}, at(3));
    CHECK(m.outstanding_demand() == 0.0);
    CHECK_FALSE(m.step(proto::load_event::SlotTick{}, at(4)).request);
  }

  TEST_CASE("a timed out request is not repeated when reissue is off") {
    proto::LoadMachine m(load_config(6, false));
    m.step(proto::load_event::Demand{30.0}, at(0));
    const auto out = m.step(proto::load_event::SlotTick{}, at(6));
    REQUIRE(out.diagnostics.size() == 1);
    CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::request_timeout);
    CHECK_FALSE(out.request);
    CHECK(m.phase() == proto::LoadPhase::idle);
  }

  TEST_CASE("a remainder below the minimum counts as served") {
    proto::LoadMachine m(load_config());
    m.step(proto::load_event::Demand{30.0}, at(0));
    m.step(proto::load_event::GrantReceived{{kSwitch, kLoad, 1, 30.0, 2, 1}}, at(2));
    m.step(proto::load_event::SlotEnergyArrived{30.0 - 1e-4}, at(2));
    m.step(proto::load_event::SlotTick{}, at(3));
    CHECK(m.outstanding_demand() == 0.0);
    CHECK_FALSE(m.step(proto::load_event::SlotTick{}, at(4)).request);
  }

  TEST_CASE("non-positive demand is refused") {
    proto::LoadMachine m(load_config());
    CHECK_THROWS_AS(m.step(proto::load_event::Demand{0.0}, at(0)), eps::PreconditionError);
    CHECK_THROWS_AS(m.step(proto::load_event::Demand{NAN}, at(0)), eps::PreconditionError);
  }
}

TEST_SUITE("source machine") {
  proto::SourceMachine feeder(double cap) {
    proto::SourceMachineConfig cfg;
    cfg.self = kSource;
    return proto::SourceMachine(cfg, std::make_unique<proto::FeederCapacity>(cap));
  }

  TEST_CASE("uncontended request is granted for the next slot") {
    auto s = feeder(100.0);
    CHECK(s.phase() == proto::SourcePhase::listening);
    s.step(proto::source_event::RequestReceived{request(kSwitch, 40.0, 1)}, 4);
    CHECK(s.phase() == proto::SourcePhase::granting);
    const auto out = s.step(proto::source_event::SlotTick{}, 4);
    REQUIRE(out.grants.size() == 1);
    CHECK(out.grants[0] == proto::GrantMsg{kSource, kSwitch, 1, 40.0, 5, 1});
    REQUIRE(out.directives.size() == 1);
    CHECK(out.directives[0].slot == 5);
    CHECK(s.phase() == proto::SourcePhase::supplying);
    s.step(proto::source_event::SupplyComplete{kSwitch, 1}, 5);
    CHECK(s.phase() == proto::SourcePhase::listening);
  }

  TEST_CASE("three 50 J requests against a 100 J cap") {
    // Largest set of requests that fits under the cap in one slot.
    const double asks[] = {50.0, 50.0, 50.0};
    int best = 0;
    for (int mask = 0; mask < 8; ++mask) {
      double sum = 0.0;
      int count = 0;
      for (int i = 0; i < 3; ++i)
        if (mask & (1 << i)) sum += asks[i], ++count;
      if (sum <= 100.0) best = std::max(best, count);
    }
    CHECK(best == 2);

    auto s = feeder(100.0);
    const Address a = Address::of(10, 0, 1, 1), b = Address::of(10, 0, 1, 2), c = Address::of(10, 0, 1, 3);
    for (Address who : {a, b, c}) s.step(proto::source_event::RequestReceived{request(who, 50.0, 1)}, 0);
    auto out = s.step(proto::source_event::SlotTick{}, 0);
    REQUIRE(out.grants.size() == 2);
    CHECK(out.grants[0].grantee == a);
    CHECK(out.grants[1].grantee == b);
    CHECK(out.grants[0].granted_energy == 50.0);
    CHECK(s.queued() == 1);
    out = s.step(proto::source_event::SlotTick{}, 1);
    REQUIRE(out.grants.size() == 1);
    CHECK(out.grants[0].grantee == c);
    CHECK(out.grants[0].start_slot == 2);
  }

  TEST_CASE("largest remaining demand first, partial at the cap") {
    auto s = feeder(100.0);
    const Address a = Address::of(10, 0, 1, 1), b = Address::of(10, 0, 1, 2);
    s.step(proto::source_event::RequestReceived{request(a, 30.0, 1)}, 0);
    s.step(proto::source_event::RequestReceived{request(b, 90.0, 1)}, 0);
    const auto out = s.step(proto::source_event::SlotTick{}, 0);
    REQUIRE(out.grants.size() == 2);
    CHECK(out.grants[0].grantee == b);
    CHECK(out.grants[0].granted_energy == 90.0);
    CHECK(out.grants[1].grantee == a);
    CHECK(out.grants[1].granted_energy == doctest::Approx(10.0));
  }

  TEST_CASE("zero-energy request is denied") {
    auto s = feeder(100.0);
    const auto out = s.step(proto::source_event::RequestReceived{request(kSwitch, 0.0, 1)}, 3);
    REQUIRE(out.grants.size() == 1);
    CHECK(out.grants[0].granted_energy == 0.0);
    CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::malformed_request);
    CHECK(s.queued() == 0);
  }

  TEST_CASE("duplicate and stale ids are rejected") {
    auto s = feeder(100.0);
    s.step(proto::source_event::RequestReceived{request(kSwitch, 10.0, 5)}, 0);
    for (std::uint64_t id : {5u, 4u}) {
      const auto out = s.step(proto::source_event::RequestReceived{request(kSwitch, 10.0, id)}, 0);
      CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::duplicate_request);
    }
    CHECK(s.queued() == 1);
  }

  TEST_CASE("a newer request supersedes the queued one in place") {
    auto s = feeder(10.0);
    const Address a = Address::of(10, 0, 1, 1), b = Address::of(10, 0, 1, 2);
    s.step(proto::source_event::RequestReceived{request(a, 10.0, 1)}, 0);
    s.step(proto::source_event::RequestReceived{request(b, 10.0, 1)}, 0);
    const auto out = s.step(proto::source_event::RequestReceived{request(b, 10.0, 2)}, 0);
    CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::superseded_request);
    CHECK(s.queued() == 2);
    auto g = s.step(proto::source_event::SlotTick{}, 0);
    REQUIRE(g.grants.size() == 1);
    CHECK(g.grants[0].grantee == a);
    g = s.step(proto::source_event::SlotTick{}, 1);
    CHECK(g.grants[0].request_id == 2);
  }

  TEST_CASE("grant lead per grantee") {
    proto::SourceMachineConfig cfg;
    cfg.self = kSource;
    cfg.grant_lead[kSwitch] = 3;
    proto::SourceMachine s(cfg, std::make_unique<proto::FeederCapacity>(50.0));
    s.step(proto::source_event::RequestReceived{request(kSwitch, 10.0, 1)}, 7);
    CHECK(s.step(proto::source_event::SlotTick{}, 7).grants[0].start_slot == 10);
  }

  TEST_CASE("grants never exceed requests or the cap (randomized)") {
    et::SplitMix64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const double cap = rng.log_uniform(1, 200);
      auto s = feeder(cap);
      std::map<Address, std::uint64_t> ids;
      std::map<std::pair<Address, std::uint64_t>, double> asked;
      for (std::uint64_t slot = 0; slot < 20; ++slot) {
        const int arrivals = static_cast<int>(rng.below(4));
        for (int i = 0; i < arrivals; ++i) {
          const Address who{static_cast<std::uint32_t>(1 + rng.below(5))};
          const double e = rng.log_uniform(0.5, 300);
          const auto id = ++ids[who];
          asked[{who, id}] = e;
          s.step(proto::source_event::RequestReceived{request(who, e, id)}, slot);
        }
        const auto out = s.step(proto::source_event::SlotTick{}, slot);
        double total = 0.0;
        for (const auto& g : out.grants) {
          REQUIRE(g.granted_energy <= asked.at({g.grantee, g.request_id}));
          total += g.granted_energy;
        }
        REQUIRE(total <= cap * (1 + 1e-12));
      }
    }
  }
}

TEST_SUITE("switch machine") {
  proto::SwitchMachineConfig switch_config(double feeder = 1000.0) {
    proto::SwitchMachineConfig cfg;
    cfg.self = kSwitch;
    cfg.banks.num_inputs = 1;
    cfg.banks.num_outputs = 2;
    cfg.upstream.push_back({kSource, feeder, 6});
    return cfg;
  }

  TEST_CASE("quiescent with full banks") {
    proto::SwitchMachine sw(switch_config());
    const auto banks = core::make_banks(sw.config().banks, 12.0);
    const auto out = sw.step({0, banks}, {});
    CHECK(out.outbound.empty());
    CHECK(out.diagnostics.empty());
    CHECK(sw.downstream().phase() == proto::SourcePhase::listening);
  }

  TEST_CASE("below low water it requests the deficit upstream") {
    proto::SwitchMachine sw(switch_config());
    // 20% of full stored energy: every bank at 12·sqrt(0.2) V.
    const auto banks = core::make_banks(sw.config().banks, 12.0 * std::sqrt(0.2));
    const auto out = sw.step({0, banks}, {});
    REQUIRE(out.outbound.size() == 1);
    const auto& r = std::get<proto::RequestMsg>(out.outbound[0]);
    CHECK(r.target == kSource);
    CHECK(r.requester == kSwitch);
    CHECK(r.requested_energy == doctest::Approx(0.8 * 576.0));
    CHECK(r.load_capacitance == 8.0);
    CHECK(r.load_voltage == doctest::Approx(12.0 * std::sqrt(0.2)));
    // Still waiting: no second request.
    CHECK(sw.step({1, banks}, {}).outbound.empty());
  }

  TEST_CASE("deficit split across sources by feeder capacity") {
    auto cfg = switch_config(100.0);
    const Address second = Address::of(10, 0, 0, 2);
    cfg.upstream.push_back({second, 100.0, 6});
    proto::SwitchMachine sw(cfg);
    const auto banks = core::make_banks(cfg.banks, 0.0);
    const auto out = sw.step({0, banks}, {});
    REQUIRE(out.outbound.size() == 2);
    CHECK(std::get<proto::RequestMsg>(out.outbound[0]).target == kSource);
    CHECK(std::get<proto::RequestMsg>(out.outbound[0]).requested_energy == 100.0);
    CHECK(std::get<proto::RequestMsg>(out.outbound[1]).target == second);
  }

  TEST_CASE("downstream grant reserves banks") {
    proto::SwitchMachine sw(switch_config());
    const auto banks = core::make_banks(sw.config().banks, 12.0);
    const std::vector<proto::Message> inbox{proto::RequestMsg{kLoad, kSwitch, 40.0, 1.0, 0.0, 1}};
    const auto out = sw.step({2, banks}, inbox);
    REQUIRE(out.outbound.size() == 1);
    const auto& g = std::get<proto::GrantMsg>(out.outbound[0]);
    CHECK(g.granted_energy == 40.0);
    CHECK(g.start_slot == 3);
    const auto res = sw.inventory().reservations_for(3);
    REQUIRE(res.size() == 1);
    CHECK(res[0].banks == std::vector<core::BankId>{0, 1, 2});
  }

  TEST_CASE("request beyond stored energy gets the n = k amount") {
    proto::SwitchMachine sw(switch_config());
    const auto banks = core::make_banks(sw.config().banks, 12.0);
    const std::vector<proto::Message> inbox{proto::RequestMsg{kLoad, kSwitch, 1000.0, 1.0, 0.0, 1}};
    const auto out = sw.step({0, banks}, inbox);
    const auto& g = std::get<proto::GrantMsg>(out.outbound[0]);
    CHECK(g.granted_energy == doctest::Approx(et::oracle_delivered(8, 1.0, 12.0, 1.0, 0.0)));
    CHECK(g.granted_energy == doctest::Approx(56.888).epsilon(1e-4));
  }

  TEST_CASE("reserved banks are not offered twice") {
    proto::SwitchMachine sw(switch_config());
    const auto banks = core::make_banks(sw.config().banks, 12.0);
    const Address other = Address::of(10, 0, 2, 2);
    const std::vector<proto::Message> inbox{proto::RequestMsg{kLoad, kSwitch, 48.0, 1.0, 0.0, 1},
                                            proto::RequestMsg{other, kSwitch, 48.0, 1.0, 0.0, 1}};
    const auto out = sw.step({0, banks}, inbox);
    REQUIRE(out.outbound.size() == 2);
    CHECK(std::get<proto::GrantMsg>(out.outbound[0]).granted_energy == 48.0);
    // Three banks left: 0.5·(36/4)²·... the n = 3 amount.
    CHECK(std::get<proto::GrantMsg>(out.outbound[1]).granted_energy ==
          doctest::Approx(et::oracle_delivered(3, 1.0, 12.0, 1.0, 0.0)));
  }

  TEST_CASE("grant from the source and recharge arrival") {
    proto::SwitchMachine sw(switch_config());
    const auto banks = core::make_banks(sw.config().banks, 0.0);
    auto out = sw.step({0, banks}, {});
    const auto r = std::get<proto::RequestMsg>(out.outbound[0]);
    const std::vector<proto::Message> inbox{proto::GrantMsg{kSource, kSwitch, r.request_id, 576.0, 2, 1}};
    out = sw.step({1, banks}, inbox);
    CHECK(out.outbound.empty());
    CHECK(sw.upstream(kSource)->accepts_energy(2, r.request_id));
    const auto full = core::make_banks(sw.config().banks, 12.0);
    CHECK(sw.record_recharge(kSource, 576.0, {2, full}).empty());
    CHECK(sw.upstream(kSource)->phase() == proto::LoadPhase::idle);
    CHECK(sw.step({3, full}, {}).outbound.empty());
  }

  TEST_CASE("above low water with a full bank left it waits") {
    proto::SwitchMachine sw(switch_config());
    auto banks = core::make_banks(sw.config().banks, 12.0);
    for (std::size_t i = 4; i < banks.size(); ++i) banks[i].capacitor = banks[i].capacitor.with_voltage(6.0);
    CHECK(sw.step({0, banks}, {}).outbound.empty());
  }

  TEST_CASE("no full bank triggers a refill above low water") {
    proto::SwitchMachine sw(switch_config());
    const auto banks = core::make_banks(sw.config().banks, 11.0);
    const auto out = sw.step({0, banks}, {});
    REQUIRE(out.outbound.size() == 1);
    CHECK(std::get<proto::RequestMsg>(out.outbound[0]).requested_energy == doctest::Approx(8 * 0.5 * (144.0 - 121.0)));
  }

  TEST_CASE("once started a refill runs until every bank is full") {
    proto::SwitchMachine sw(switch_config());
    auto banks = core::make_banks(sw.config().banks, 12.0);
    for (std::size_t i = 3; i < banks.size(); ++i) banks[i].capacitor = banks[i].capacitor.with_voltage(0.0);
    auto out = sw.step({0, banks}, {});
    REQUIRE(out.outbound.size() == 1);
    const auto r = std::get<proto::RequestMsg>(out.outbound[0]);
    CHECK(r.requested_energy == doctest::Approx(5 * 72.0));

    // Partial refill: two banks still at 6 V, well above low water.
    const std::vector<proto::Message> inbox{proto::GrantMsg{kSource, kSwitch, r.request_id, 360.0, 2, 1}};
    sw.step({1, banks}, inbox);
    for (std::size_t i = 3; i < banks.size(); ++i)
      banks[i].capacitor = banks[i].capacitor.with_voltage(i < 6 ? 12.0 : 6.0);
    sw.record_recharge(kSource, 252.0, {2, banks});
    CHECK(sw.step({3, banks}, {}).outbound.empty());  // grant window closes short
    CHECK(sw.upstream(kSource)->outstanding_demand() == 0.0);
    out = sw.step({4, banks}, {});
    REQUIRE(out.outbound.size() == 1);
    CHECK(std::get<proto::RequestMsg>(out.outbound[0]).requested_energy == doctest::Approx(2 * 54.0));
  }

  TEST_CASE("grant from a stranger is discarded") {
    proto::SwitchMachine sw(switch_config());
    const auto banks = core::make_banks(sw.config().banks, 12.0);
    const std::vector<proto::Message> inbox{proto::GrantMsg{Address::of(9, 9, 9, 9), kSwitch, 1, 5.0, 1, 1}};
    const auto out = sw.step({0, banks}, inbox);
    REQUIRE(out.diagnostics.size() == 1);
    CHECK(out.diagnostics[0].kind == proto::DiagnosticKind::unknown_grant);
  }
}
