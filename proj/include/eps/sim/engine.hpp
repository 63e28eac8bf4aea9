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
#include <functional>
#include <vector>

#include "eps/sim/audit.hpp"
#include "eps/sim/metrics.hpp"
#include "eps/sim/scenario.hpp"
#include "eps/sim/trace.hpp"

namespace eps::sim {

struct RunOptions {
  /// Applied to the finished trace before the audit runs. Test hook.
  std::function<void(SimulationTrace&)> before_audit;
};

struct RunResult {
  SimulationTrace trace;
  Metrics metrics;
  AuditReport audit;
};

/// Validates, then executes every slot. Each slot runs in a fixed order:
/// deliver due messages; step every entity in ascending address order;
/// schedule the crossbar; move energy; update metrics.
RunResult run(const ScenarioConfig& scenario, const RunOptions& options = {});

/// Adds `joules` to the energy of the first transfer row in `slot`.
/// Returns false if that slot moved no energy.
bool tamper_transfer(SimulationTrace& trace, std::uint64_t slot, double joules);

/// Writes trace.log, protocol.log, transfers.csv, metrics.csv,
/// bank_utilization.csv, latency.csv and audit.csv into `dir`.
std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& dir);

}  // namespace eps::sim
