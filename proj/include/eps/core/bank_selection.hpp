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

#include "eps/error.hpp"
#include "eps/physics/capacitor.hpp"

namespace eps::core {

/// The load is already at or above the source voltage.
class NoTransferPossible : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

struct BankSelection {
  unsigned n = 0;                     // banks to aggregate, 1..k
  double predicted_delivered = 0.0;   // J into the load with n banks
  bool partial = false;               // even n = k falls short of the request
};

/// Energy the load gains when n banks of `bank_capacitance` at
/// `source_voltage` are paralleled onto it.
double predicted_delivery(unsigned n, const physics::Capacitor& load, double source_voltage, double bank_capacitance);

/// Smallest n in [1, k] whose predicted delivery covers `requested_energy`;
/// n = k (flagged partial) if none does.
BankSelection select_bank_count(double requested_energy, const physics::Capacitor& load, double source_voltage,
                                unsigned k, double bank_capacitance);

}  // namespace eps::core
