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

#include "eps/physics/capacitor.hpp"

namespace eps::physics {

/// Result of connecting a source capacitor to a load capacitor and letting
/// them settle through an unspecified (parasitic) resistance.
struct MergeOutcome {
  double equilibrium_voltage = 0.0;       // V
  double combined_energy = 0.0;           // J, ½(Cs+Cl)·V_sl²
  double energy_delivered_to_load = 0.0;  // J, ½Cl(V_sl² − Vl²); negative if Vl > Vs
  double energy_dissipated = 0.0;         // J, always >= 0
  double combined_capacitance = 0.0;      // F, Cs + Cl
};

/// Charge-conserving shared voltage (Cs·Vs + Cl·Vl)/(Cs + Cl).
double equilibrium_voltage(const Capacitor& source, const Capacitor& load) noexcept;

/// Instantaneous (zero-resistance limit) capacitor-to-capacitor exchange.
MergeOutcome merge(const Capacitor& source, const Capacitor& load) noexcept;

/// Fraction of the load's maximum energy (½·Cl·Vs²) that it holds after
/// merging with a source of n·Cl charged to vs_initial: (V_sl/Vs)².
/// Independent of the absolute value of Cl.
double transfer_ratio(unsigned n, double vl_initial, double vs_initial);

/// Charging a capacitor directly from a stiff DC source (the Cs → ∞ limit
/// of merge). The target ends exactly at the source voltage.
struct SourceChargeOutcome {
  double final_voltage = 0.0;
  double energy_from_source = 0.0;  // Q·V_source
  double energy_stored = 0.0;       // gain of the target
  double energy_dissipated = 0.0;   // ½·C·ΔV²
};

SourceChargeOutcome charge_from_voltage_source(const Capacitor& target, double source_volts);

/// Same, but the circuit opens once the target has gained `max_gain` J, so
/// it may stop short of the source voltage.
SourceChargeOutcome charge_from_voltage_source(const Capacitor& target, double source_volts, double max_gain);

}  // namespace eps::physics
