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

#include "eps/protocol/messages.hpp"

#include <charconv>
#include <cmath>

#include "eps/numfmt.hpp"

namespace eps::protocol {

std::optional<Address> Address::parse(std::string_view text) {
  std::uint32_t value = 0;
  for (int part = 0; part < 4; ++part) {
    if (part > 0) {
      if (text.empty() || text.front() != '.') return std::nullopt;
      text.remove_prefix(1);
    }
    std::size_t len = 0;
    while (len < text.size() && text[len] >= '0' && text[len] <= '9') ++len;
    if (len == 0 || len > 3 || (len > 1 && text[0] == '0')) return std::nullopt;
    unsigned octet = 0;
    std::from_chars(text.data(), text.data() + len, octet);
    if (octet > 255) return std::nullopt;
    value = (value << 8) | octet;
    text.remove_prefix(len);
  }
  if (!text.empty()) return std::nullopt;
  return Address{value};
}

std::string Address::to_string() const {
  std::string out;
  for (int shift = 24; shift >= 0; shift -= 8) {
    if (shift != 24) out.push_back('.');
    out += std::to_string((value >> shift) & 0xFFu);
  }
  return out;
}

Address sender(const Message& msg) noexcept {
  if (const auto* r = std::get_if<RequestMsg>(&msg)) return r->requester;
  return std::get<GrantMsg>(msg).granter;
}

Address recipient(const Message& msg) noexcept {
  if (const auto* r = std::get_if<RequestMsg>(&msg)) return r->target;
  return std::get<GrantMsg>(msg).grantee;
}

std::string_view type_name(const Message& msg) noexcept {
  return std::holds_alternative<RequestMsg>(msg) ? "request" : "grant";
}

std::string render(const Message& msg) {
  std::string out(type_name(msg));
  if (const auto* r = std::get_if<RequestMsg>(&msg)) {
    out += " from=" + r->requester.to_string() + " to=" + r->target.to_string();
    out += " id=" + std::to_string(r->request_id) + " energy_J=";
    append_double(out, r->requested_energy);
    out += " load_C_F=";
    append_double(out, r->load_capacitance);
    out += " load_V=";
    append_double(out, r->load_voltage);
  } else {
    const auto& g = std::get<GrantMsg>(msg);
    out += " from=" + g.granter.to_string() + " to=" + g.grantee.to_string();
    out += " id=" + std::to_string(g.request_id) + " energy_J=";
    append_double(out, g.granted_energy);
    out += " start_slot=" + std::to_string(g.start_slot) + " slot_count=" + std::to_string(g.slot_count);
  }
  return out;
}

bool well_formed(const RequestMsg& msg) noexcept {
  return std::isfinite(msg.requested_energy) && msg.requested_energy > 0.0 && std::isfinite(msg.load_capacitance) &&
         msg.load_capacitance > 0.0 && std::isfinite(msg.load_voltage) && msg.load_voltage >= 0.0;
}

}  // namespace eps::protocol
