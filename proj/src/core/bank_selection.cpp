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

#include "eps/core/bank_selection.hpp"

#include <cmath>

#include "eps/physics/exchange.hpp"

namespace eps::core {

double predicted_delivery(unsigned n, const physics::Capacitor& load, double source_voltage, double bank_capacitance) {
  require(n >= 1, "predicted_delivery: n must be >= 1");
  const physics::Capacitor aggregate(static_cast<double>(n) * bank_capacitance, source_voltage);
  return physics::merge(aggregate, load).energy_delivered_to_load;
}

BankSelection select_bank_count(double requested_energy, const physics::Capacitor& load, double source_voltage,
                                unsigned k, double bank_capacitance) {
  require(std::isfinite(requested_energy) && requested_energy > 0.0, "select_bank_count: request must be > 0");
  require(k >= 1, "select_bank_count: k must be >= 1");
  require(std::isfinite(bank_capacitance) && bank_capacitance > 0.0, "select_bank_count: bank capacitance must be > 0");
  if (!(load.voltage() < source_voltage)) {
    throw NoTransferPossible("select_bank_count: load voltage is not below source voltage");
  }

  // Delivery grows with n; bisect for the first n that covers the request.
  const double at_k = predicted_delivery(k, load, source_voltage, bank_capacitance);
  if (at_k < requested_energy) return {k, at_k, true};
  unsigned lo = 1;
  unsigned hi = k;
  while (lo < hi) {
    const unsigned mid = lo + (hi - lo) / 2;
    if (predicted_delivery(mid, load, source_voltage, bank_capacitance) >= requested_energy) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return {lo, predicted_delivery(lo, load, source_voltage, bank_capacitance), false};
}

}  // namespace eps::core
