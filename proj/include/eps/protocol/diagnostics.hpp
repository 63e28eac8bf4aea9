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
#include <string>
#include <string_view>

#include "eps/protocol/messages.hpp"

namespace eps::protocol {

enum class DiagnosticKind {
  unknown_grant,       // grant matched no outstanding request; discarded
  unsolicited_energy,  // energy arrived without a live grant (violation)
  over_delivery,       // delivery exceeded the grant (bank quantization)
  grant_shortfall,     // grant window closed with energy still owed
  request_timeout,     // no grant within the timeout; request re-issued
  request_denied,      // zero-energy grant
  malformed_request,
  duplicate_request,   // request id not above the requester's last one
  superseded_request,  // queued request replaced by a newer one
};

std::string_view to_string(DiagnosticKind kind) noexcept;

/// True for the kinds that indicate a safety violation rather than routine
/// protocol behaviour.
bool is_violation(DiagnosticKind kind) noexcept;

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::unknown_grant;
  Address entity;          // reporting machine
  Address peer;            // other party, if any
  std::uint64_t request_id = 0;
  double value = 0.0;      // J, where meaningful
};

std::string render(const Diagnostic& d);

}  // namespace eps::protocol
