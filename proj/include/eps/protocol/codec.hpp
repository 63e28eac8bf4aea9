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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "eps/protocol/messages.hpp"

namespace eps::protocol {

// Wire layout, little-endian throughout. Both message kinds are 41 bytes.
//   request: type 0x01 | requester u32 | target u32 | energy f64 | C f64 | V f64 | id u64
//   grant:   type 0x02 | granter u32 | grantee u32 | id u64 | energy f64 | start u64 | count u64
inline constexpr std::uint8_t kRequestType = 0x01;
inline constexpr std::uint8_t kGrantType = 0x02;
inline constexpr std::size_t kEncodedSize = 41;

enum class DecodeErrorKind { truncated, unknown_type, trailing_bytes };

std::string_view to_string(DecodeErrorKind kind) noexcept;

class DecodeError : public std::runtime_error {
 public:
  DecodeError(DecodeErrorKind kind, std::size_t position);

  DecodeErrorKind kind() const noexcept { return kind_; }
  /// Byte offset at which decoding could not continue.
  std::size_t position() const noexcept { return position_; }

 private:
  DecodeErrorKind kind_;
  std::size_t position_;
};

std::vector<std::uint8_t> encode(const Message& msg);

/// Exactly one message; throws DecodeError otherwise.
Message decode(std::span<const std::uint8_t> bytes);

}  // namespace eps::protocol
