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
#include <random>
#include <utility>
#include <vector>

#include "eps/protocol/messages.hpp"
#include "eps/sim/scenario.hpp"

namespace eps::sim {

class SlotClock {
 public:
  explicit SlotClock(double slot_duration);

  std::uint64_t current_slot() const noexcept { return slot_; }
  double slot_duration() const noexcept { return duration_; }
  double time() const noexcept { return static_cast<double>(slot_) * duration_; }
  void advance() noexcept { ++slot_; }

 private:
  std::uint64_t slot_ = 0;
  double duration_;
};

/// Parallel data network. A message sent in slot t over a link with
/// latency d is handed over in slot t + d + 1. Messages travel encoded and
/// are decoded on delivery.
class NetworkModel {
 public:
  struct Sent {
    std::uint64_t deliver_slot = 0;
    bool lost = false;
  };

  NetworkModel(const NetworkSpec& spec, std::uint64_t seed);

  std::uint64_t latency(Address from, Address to) const;
  double loss_probability(Address from, Address to) const;

  Sent send(std::uint64_t slot, const protocol::Message& msg);

  /// Everything due in `slot`, in send order.
  std::vector<protocol::Message> deliver(std::uint64_t slot);
  bool idle() const noexcept { return queue_.empty(); }

 private:
  double draw();

  NetworkSpec spec_;
  std::map<std::pair<Address, Address>, const LinkSpec*> links_;
  std::mt19937_64 rng_;
  std::uint64_t seq_ = 0;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<std::uint8_t>> queue_;  // (slot, seq) -> wire bytes
};

}  // namespace eps::sim
