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

#include "eps/physics/transient.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "eps/error.hpp"
#include "eps/numfmt.hpp"
#include "eps/physics/rk4.hpp"

namespace eps::physics {
namespace {

std::size_t step_count(double timestep, double duration) {
  require(std::isfinite(timestep) && timestep > 0.0, "timestep must be > 0");
  require(std::isfinite(duration) && duration >= timestep, "duration must be >= timestep");
  // Slack absorbs decimal step sizes such as 10 / 0.01.
  return static_cast<std::size_t>(std::floor(duration / timestep + 1e-9));
}

// Voltages as a function of the charge q moved from source to load.
struct ChargeView {
  double qs0, ql0, cs, cl;
  double source_voltage(double q) const { return (qs0 - q) / cs; }
  double load_voltage(double q) const { return (ql0 + q) / cl; }
  double difference(double q) const { return source_voltage(q) - load_voltage(q); }
};

}  // namespace

std::string_view to_string(DampingClass c) noexcept {
  switch (c) {
    case DampingClass::resistive_only: return "resistive-only";
    case DampingClass::overdamped: return "overdamped";
    case DampingClass::critically_damped: return "critically-damped";
    case DampingClass::underdamped: return "underdamped";
  }
  return "unknown";
}

DampingClass classify_damping(double resistance, double inductance, double ceq) {
  require(resistance >= 0.0 && inductance > 0.0 && ceq > 0.0, "classify_damping: invalid circuit values");
  const double threshold = 4.0 * inductance / ceq;
  const double disc = resistance * resistance - threshold;
  if (std::abs(disc) <= 1e-12 * threshold) return DampingClass::critically_damped;
  return disc > 0.0 ? DampingClass::overdamped : DampingClass::underdamped;
}

double natural_period(double inductance, double ceq) {
  return 2.0 * std::numbers::pi * std::sqrt(inductance * ceq);
}

TransientWaveform rc_transient(const Capacitor& source, const Capacitor& load, double resistance, double timestep,
                               double duration) {
  require(std::isfinite(resistance) && resistance > 0.0,
          "rc_transient: resistance must be > 0 (use merge for an ideal connection)");
  const std::size_t steps = step_count(timestep, duration);
  const ChargeView view{source.charge(), load.charge(), source.capacitance(), load.capacitance()};

  auto deriv = [&](double, const OdeState<1>& y) { return OdeState<1>{view.difference(y[0]) / resistance}; };

  TransientWaveform wf;
  wf.timestep = timestep;
  wf.damping = DampingClass::resistive_only;
  wf.samples.reserve(steps + 1);
  OdeState<1> y{0.0};
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * timestep;
    const double q = y[0];
    wf.samples.push_back({t, view.source_voltage(q), view.load_voltage(q), view.difference(q) / resistance});
    if (i < steps) y = rk4_step<1>(deriv, t, y, timestep);
  }
  return wf;
}

TransientWaveform rlc_transient(const Capacitor& source, const Capacitor& load, double resistance, double inductance,
                                double timestep, double duration) {
  require(std::isfinite(resistance) && resistance >= 0.0, "rlc_transient: resistance must be >= 0");
  require(std::isfinite(inductance) && inductance > 0.0, "rlc_transient: inductance must be > 0");
  const double ceq = series_capacitance(source.capacitance(), load.capacitance());
  const std::size_t steps = step_count(timestep, duration);
  require(timestep <= natural_period(inductance, ceq) / 50.0 * (1.0 + 1e-12),
          "rlc_transient: timestep must resolve the natural period (<= period/50)");
  const ChargeView view{source.charge(), load.charge(), source.capacitance(), load.capacitance()};

  // y = (q, i):  q' = i,  L·i' = ΔV(q) − R·i
  auto deriv = [&](double, const OdeState<2>& y) {
    return OdeState<2>{y[1], (view.difference(y[0]) - resistance * y[1]) / inductance};
  };

  TransientWaveform wf;
  wf.timestep = timestep;
  wf.damping = classify_damping(resistance, inductance, ceq);
  wf.samples.reserve(steps + 1);
  OdeState<2> y{0.0, 0.0};
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * timestep;
    wf.samples.push_back({t, view.source_voltage(y[0]), view.load_voltage(y[0]), y[1]});
    if (i < steps) y = rk4_step<2>(deriv, t, y, timestep);
  }
  return wf;
}

void write_waveform_csv(std::ostream& os, const TransientWaveform& waveform) {
  std::string line;
  os << "t_s,v_source_V,v_load_V,i_A\n";
  for (const auto& s : waveform.samples) {
    line.clear();
    append_double(line, s.time);
    line += ',';
    append_double(line, s.source_voltage);
    line += ',';
    append_double(line, s.load_voltage);
    line += ',';
    append_double(line, s.current);
    line += '\n';
    os << line;
  }
}

}  // namespace eps::physics
