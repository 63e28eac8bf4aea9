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

#include "eps/physics/exchange.hpp"

#include <algorithm>
#include <cmath>

#include "eps/error.hpp"

namespace eps::physics {

double equilibrium_voltage(const Capacitor& source, const Capacitor& load) noexcept {
  // Weighted-mean form: returns Vl bit-exactly when Vs == Vl.
  const double cs = source.capacitance();
  const double cl = load.capacitance();
  return load.voltage() + cs * (source.voltage() - load.voltage()) / (cs + cl);
}

MergeOutcome merge(const Capacitor& source, const Capacitor& load) noexcept {
  const double cs = source.capacitance();
  const double cl = load.capacitance();
  const double vl = load.voltage();
  const double v_eq = equilibrium_voltage(source, load);
  const double dv = source.voltage() - vl;
  const double initial = source.energy() + load.energy();

  MergeOutcome out;
  out.equilibrium_voltage = v_eq;
  out.combined_capacitance = cs + cl;
  // Rounding can push the product an ulp above the initial total.
  out.combined_energy = std::min(0.5 * (cs + cl) * v_eq * v_eq, initial);
  out.energy_delivered_to_load = 0.5 * cl * (v_eq - vl) * (v_eq + vl);
  out.energy_dissipated = 0.5 * series_capacitance(cs, cl) * dv * dv;
  return out;
}

double transfer_ratio(unsigned n, double vl_initial, double vs_initial) {
  require(n >= 1, "transfer_ratio: n must be >= 1");
  require(std::isfinite(vs_initial) && vs_initial > 0.0, "transfer_ratio: vs_initial must be > 0");
  require(std::isfinite(vl_initial) && vl_initial >= 0.0, "transfer_ratio: vl_initial must be >= 0");
  require(vl_initial <= vs_initial, "transfer_ratio: vl_initial must not exceed vs_initial");
  // Cl cancels; use Cl = 1 F.
  const auto v_eq = equilibrium_voltage(Capacitor(static_cast<double>(n), vs_initial), Capacitor(1.0, vl_initial));
  const double r = v_eq / vs_initial;
  return r * r;
}

SourceChargeOutcome charge_from_voltage_source(const Capacitor& target, double source_volts) {
  require(std::isfinite(source_volts) && source_volts >= 0.0, "source voltage must be finite and >= 0");
  const double c = target.capacitance();
  const double v0 = target.voltage();
  const double dv = source_volts - v0;
  SourceChargeOutcome out;
  out.final_voltage = source_volts;
  out.energy_from_source = c * dv * source_volts;
  out.energy_stored = 0.5 * c * dv * (source_volts + v0);
  out.energy_dissipated = 0.5 * c * dv * dv;
  return out;
}

SourceChargeOutcome charge_from_voltage_source(const Capacitor& target, double source_volts, double max_gain) {
  require(std::isfinite(max_gain) && max_gain >= 0.0, "max_gain must be finite and >= 0");
  const auto full = charge_from_voltage_source(target, source_volts);
  if (full.energy_stored <= max_gain) return full;
  const double c = target.capacitance();
  const double v0 = target.voltage();
  const double v1 = std::min(source_volts, std::sqrt(v0 * v0 + 2.0 * max_gain / c));
  const double d = v1 - v0;
  SourceChargeOutcome out;
  out.final_voltage = v1;
  out.energy_from_source = c * d * source_volts;
  out.energy_stored = 0.5 * c * d * (v1 + v0);
  // Loss in the series resistance: the source sat above the target the whole time.
  out.energy_dissipated = c * d * (source_volts - v1) + 0.5 * c * d * d;
  return out;
}

}  // namespace eps::physics
