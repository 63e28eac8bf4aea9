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

#include <iosfwd>
#include <string_view>
#include <vector>

#include "eps/physics/capacitor.hpp"

namespace eps::physics {

enum class DampingClass { resistive_only, overdamped, critically_damped, underdamped };

std::string_view to_string(DampingClass c) noexcept;

struct WaveformSample {
  double time = 0.0;            // s
  double source_voltage = 0.0;  // V
  double load_voltage = 0.0;    // V
  double current = 0.0;         // A, positive from source to load
};

/// Uniformly sampled record of a two-capacitor exchange. Sample i sits at
/// exactly i·timestep.
struct TransientWaveform {
  double timestep = 0.0;
  std::vector<WaveformSample> samples;
  DampingClass damping = DampingClass::resistive_only;
};

/// Series-RLC classification from the sign of R² − 4L/Ceq. Values within a
/// relative 1e-12 of zero count as critical.
DampingClass classify_damping(double resistance, double inductance, double ceq);

/// 2π·√(L·Ceq), the undamped natural period.
double natural_period(double inductance, double ceq);

/// Exchange through a resistor, integrated with fixed-step RK4 over the
/// transferred charge. Time constant R·Ceq with Ceq = Cs·Cl/(Cs+Cl).
/// Requires resistance > 0, timestep > 0 and duration >= timestep.
TransientWaveform rc_transient(const Capacitor& source, const Capacitor& load, double resistance, double timestep,
                               double duration);

/// Exchange through a series resistor and inductor; RK4 over (charge,
/// current). Requires resistance >= 0, inductance > 0 and a timestep no
/// coarser than natural_period/50.
TransientWaveform rlc_transient(const Capacitor& source, const Capacitor& load, double resistance, double inductance,
                                double timestep, double duration);

/// Header `t_s,v_source_V,v_load_V,i_A`, one row per sample.
void write_waveform_csv(std::ostream& os, const TransientWaveform& waveform);

}  // namespace eps::physics
