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

namespace eps::core {

/// Static description of one energy packet switch.
struct SwitchConfig {
  std::size_t num_inputs = 1;   // S
  std::size_t num_outputs = 1;  // D
  std::size_t num_banks = 8;    // k
  double bank_capacitance = 1.0;   // F, identical for every bank
  double rated_voltage = 12.0;     // V, a bank at this level is "full"
  double max_bank_voltage = 16.0;  // V, hard ceiling

  /// Throws PreconditionError on any violated invariant.
  void validate() const;

  /// Energy of one bank at rated voltage.
  double bank_full_energy() const noexcept { return 0.5 * bank_capacitance * rated_voltage * rated_voltage; }
  double full_energy() const noexcept { return bank_full_energy() * static_cast<double>(num_banks); }
};

/// Two voltages closer than this are treated as electrically identical.
inline constexpr double kVoltageMatchTolerance = 1e-9;

}  // namespace eps::core
