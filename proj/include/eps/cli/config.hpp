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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eps/sim/scenario.hpp"

namespace eps::cli {

/// Error codes printed on the `error code=...` line.
namespace code {
inline constexpr std::string_view usage = "usage";
inline constexpr std::string_view config_io = "config_io";
inline constexpr std::string_view config_parse = "config_parse";
inline constexpr std::string_view config_field = "config_field";
inline constexpr std::string_view output_io = "output_io";
inline constexpr std::string_view audit_violation = "audit_violation";
inline constexpr std::string_view internal = "internal";
}  // namespace code

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string_view code, std::string field, const std::string& message);

  const std::string& code() const noexcept { return code_; }
  /// Dotted path such as `loads[0].demands[2].slot`; empty if none applies.
  const std::string& field() const noexcept { return field_; }
  /// 1-based position of a syntax error.
  std::optional<std::size_t> line;
  std::optional<std::size_t> column;

 private:
  std::string code_;
  std::string field_;
};

/// JSON with `//` and `/* */` comments. Unknown keys are rejected.
/// The result is validated before it is returned.
sim::ScenarioConfig parse_scenario(std::string_view text);
sim::ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace eps::cli
