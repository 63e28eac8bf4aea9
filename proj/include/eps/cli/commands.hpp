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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace eps::cli {

/// Exit statuses shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAudit = 2;

/// One line: `error code=<code> key=value ... message="..."`.
void print_error(std::ostream& err, std::string_view code, const std::string& message,
                 const std::vector<std::pair<std::string, std::string>>& fields = {});

struct RunArgs {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;  // overrides run.out_dir
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> slots;
  // Test hook: corrupt one transfer row before the audit.
  std::optional<std::uint64_t> tamper_slot;
  double tamper_joules = 1.0;
};

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);

enum class CurveMode { vs_preload, vs_ratio };

struct CurveArgs {
  CurveMode mode = CurveMode::vs_preload;
  double source_voltage = 12.0;    // V on every bank
  double bank_capacitance = 1.0;   // F
  double load_capacitance = 1.0;   // F
  unsigned banks = 1;              // vs_preload: banks in parallel
  unsigned max_banks = 8;          // vs_ratio: sweep 1..max_banks
  std::size_t points = 50;         // vs_preload: Vl grid over [0, Vs]
  std::optional<std::filesystem::path> out_dir;
};

/// vs_preload header `vl_V,delivered_J,ratio,charge_C`;
/// vs_ratio header `n,cs_F,v_sl_V,delivered_J,ratio`.
/// Throws PreconditionError on an empty grid or bad parameters.
void write_transfer_curve(std::ostream& os, const CurveArgs& args);
int cmd_transfer_curve(const CurveArgs& args, std::ostream& out, std::ostream& err);

struct TransientArgs {
  double source_capacitance = 1.0;
  double source_voltage = 12.0;
  double load_capacitance = 1.0;
  double load_voltage = 0.0;
  double resistance = 1.0;
  std::optional<double> inductance;  // RLC when set, RC otherwise
  double timestep = 1e-3;
  double duration = 1.0;
  std::optional<std::filesystem::path> out_dir;
};

void write_transient(std::ostream& os, const TransientArgs& args);
int cmd_transient(const TransientArgs& args, std::ostream& out, std::ostream& err);

}  // namespace eps::cli
