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

#include "eps/protocol/diagnostics.hpp"

#include "eps/numfmt.hpp"

namespace eps::protocol {

std::string_view to_string(DiagnosticKind kind) noexcept {
  switch (kind) {
    case DiagnosticKind::unknown_grant: return "unknown_grant";
    case DiagnosticKind::unsolicited_energy: return "unsolicited_energy";
    case DiagnosticKind::over_delivery: return "over_delivery";
    case DiagnosticKind::grant_shortfall: return "grant_shortfall";
    case DiagnosticKind::request_timeout: return "request_timeout";
    case DiagnosticKind::request_denied: return "request_denied";
    case DiagnosticKind::malformed_request: return "malformed_request";
    case DiagnosticKind::duplicate_request: return "duplicate_request";
    case DiagnosticKind::superseded_request: return "superseded_request";
  }
  return "?";
}

bool is_violation(DiagnosticKind kind) noexcept { return kind == DiagnosticKind::unsolicited_energy; }

std::string render(const Diagnostic& d) {
  std::string out(to_string(d.kind));
  out += " at=" + d.entity.to_string() + " peer=" + d.peer.to_string() + " id=" + std::to_string(d.request_id);
  out += " value_J=";
  append_double(out, d.value);
  return out;
}

}  // namespace eps::protocol
