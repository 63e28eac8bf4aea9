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

namespace eps::physics {

/// An ideal DC capacitor: capacitance in farads, terminal voltage in volts.
/// Charge and energy are derived on demand and never stored.
class Capacitor {
 public:
  /// Throws PreconditionError unless capacitance is finite and > 0 and
  /// voltage is finite and >= 0.
  Capacitor(double farads, double volts);

  double capacitance() const noexcept { return farads_; }
  double voltage() const noexcept { return volts_; }
  double charge() const noexcept { return farads_ * volts_; }
  double energy() const noexcept { return 0.5 * farads_ * volts_ * volts_; }

  Capacitor with_voltage(double volts) const { return Capacitor(farads_, volts); }

  friend bool operator==(const Capacitor&, const Capacitor&) = default;

 private:
  double farads_;
  double volts_;
};

/// ½·C·V².
inline double stored_energy(const Capacitor& cap) noexcept { return cap.energy(); }

/// C_a·C_b / (C_a + C_b): the capacitance seen by a loop through both.
inline double series_capacitance(double a, double b) noexcept { return a * b / (a + b); }

}  // namespace eps::physics
