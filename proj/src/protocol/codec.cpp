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

#include "eps/protocol/codec.hpp"

#include <bit>
#include <string>

namespace eps::protocol {
namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void put(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::size_t position() const noexcept { return pos_; }
  bool done() const noexcept { return pos_ == bytes_.size(); }

 private:
  std::uint64_t get(int bytes) {
    if (bytes_.size() - pos_ < static_cast<std::size_t>(bytes)) throw DecodeError(DecodeErrorKind::truncated, bytes_.size());
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += bytes;
    return v;
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(DecodeErrorKind kind) noexcept {
  switch (kind) {
    case DecodeErrorKind::truncated: return "truncated";
    case DecodeErrorKind::unknown_type: return "unknown_type";
    case DecodeErrorKind::trailing_bytes: return "trailing_bytes";
  }
  return "?";
}

DecodeError::DecodeError(DecodeErrorKind kind, std::size_t position)
    : std::runtime_error(std::string(to_string(kind)) + " at byte " + std::to_string(position)),
      kind_(kind),
      position_(position) {}

std::vector<std::uint8_t> encode(const Message& msg) {
  Writer w;
  if (const auto* r = std::get_if<RequestMsg>(&msg)) {
    w.u8(kRequestType);
    w.u32(r->requester.value);
    w.u32(r->target.value);
    w.f64(r->requested_energy);
    w.f64(r->load_capacitance);
    w.f64(r->load_voltage);
    w.u64(r->request_id);
  } else {
    const auto& g = std::get<GrantMsg>(msg);
    w.u8(kGrantType);
    w.u32(g.granter.value);
    w.u32(g.grantee.value);
    w.u64(g.request_id);
    w.f64(g.granted_energy);
    w.u64(g.start_slot);
    w.u64(g.slot_count);
  }
  return w.take();
}

Message decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const std::uint8_t type = r.u8();
  Message out;
  if (type == kRequestType) {
    RequestMsg m;
    m.requester.value = r.u32();
    m.target.value = r.u32();
    m.requested_energy = r.f64();
    m.load_capacitance = r.f64();
    m.load_voltage = r.f64();
    m.request_id = r.u64();
    out = m;
  } else if (type == kGrantType) {
    GrantMsg m;
    m.granter.value = r.u32();
    m.grantee.value = r.u32();
    m.request_id = r.u64();
    m.granted_energy = r.f64();
    m.start_slot = r.u64();
    m.slot_count = r.u64();
    out = m;
  } else {
    throw DecodeError(DecodeErrorKind::unknown_type, 0);
  }
  if (!r.done()) throw DecodeError(DecodeErrorKind::trailing_bytes, r.position());
  return out;
}

}  // namespace eps::protocol
