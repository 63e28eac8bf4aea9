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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace eps::protocol {

/// 32-bit grid element identifier, written as a dotted quad.
struct Address {
  std::uint32_t value = 0;

  static constexpr Address of(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) noexcept {
    return Address{(std::uint32_t{a} << 24) | (std::uint32_t{b} << 16) | (std::uint32_t{c} << 8) | std::uint32_t{d}};
  }
  /// Strict a.b.c.d with each part 0..255 and no leading zeros.
  static std::optional<Address> parse(std::string_view text);

  std::string to_string() const;
  friend auto operator<=>(const Address&, const Address&) = default;
};

struct RequestMsg {
  Address requester;
  Address target;
  double requested_energy = 0.0;  // J
  double load_capacitance = 0.0;  // F of the receiving capacitor
  double load_voltage = 0.0;      // V of the receiving capacitor
  std::uint64_t request_id = 0;
  friend bool operator==(const RequestMsg&, const RequestMsg&) = default;
};

/// granted_energy == 0 is an explicit denial.
struct GrantMsg {
  Address granter;
  Address grantee;
  std::uint64_t request_id = 0;
  double granted_energy = 0.0;
  std::uint64_t start_slot = 0;
  std::uint64_t slot_count = 1;
  friend bool operator==(const GrantMsg&, const GrantMsg&) = default;
};

using Message = std::variant<RequestMsg, GrantMsg>;

Address sender(const Message& msg) noexcept;
Address recipient(const Message& msg) noexcept;
std::string_view type_name(const Message& msg) noexcept;

/// One-line key=value rendering, stable field order.
std::string render(const Message& msg);

/// A RequestMsg is well formed when its energy is positive and its
/// receiving capacitor is physical.
bool well_formed(const RequestMsg& msg) noexcept;

}  // namespace eps::protocol
