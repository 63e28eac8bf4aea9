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

#include "eps/physics/capacitor.hpp"

#include <cmath>

#include "eps/error.hpp"

namespace eps::physics {

Capacitor::Capacitor(double farads, double volts) : farads_(farads), volts_(volts) {
  require(std::isfinite(farads) && farads > 0.0, "capacitance must be finite and > 0");
  require(std::isfinite(volts) && volts >= 0.0, "capacitor voltage must be finite and >= 0");
}

}  // namespace eps::physics
