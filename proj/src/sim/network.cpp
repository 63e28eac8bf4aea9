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

#include "eps/sim/network.hpp"

#include "eps/error.hpp"
#include "eps/protocol/codec.hpp"

namespace eps::sim {

SlotClock::SlotClock(double slot_duration) : duration_(slot_duration) {
  require(slot_duration > 0.0, "slot duration must be positive");
}

NetworkModel::NetworkModel(const NetworkSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {
  for (const auto& link : spec_.links) links_[{link.from, link.to}] = &link;
}

std::uint64_t NetworkModel::latency(Address from, Address to) const {
  const auto it = links_.find({from, to});
  return it == links_.end() ? spec_.latency_slots : it->second->latency_slots;
}

double NetworkModel::loss_probability(Address from, Address to) const {
  const auto it = links_.find({from, to});
  return it == links_.end() ? spec_.loss_probability : it->second->loss_probability;
}

// One draw per message whatever the loss setting, so the delivery schedule
// depends only on the seed and the send sequence.
double NetworkModel::draw() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

NetworkModel::Sent NetworkModel::send(std::uint64_t slot, const protocol::Message& msg) {
  const Address from = protocol::sender(msg), to = protocol::recipient(msg);
  const double u = draw();
  Sent out{slot + latency(from, to) + 1, u < loss_probability(from, to)};
  if (!out.lost) queue_.emplace(std::pair{out.deliver_slot, seq_}, protocol::encode(msg));
  ++seq_;
  return out;
}

std::vector<protocol::Message> NetworkModel::deliver(std::uint64_t slot) {
  std::vector<protocol::Message> out;
  auto it = queue_.begin();
  while (it != queue_.end() && it->first.first <= slot) {
    out.push_back(protocol::decode(it->second));
    it = queue_.erase(it);
  }
  return out;
}

}  // namespace eps::sim
