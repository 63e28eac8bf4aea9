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

#include "eps/core/switch_config.hpp"

#include <cmath>

#include "eps/error.hpp"

namespace eps::core {

void SwitchConfig::validate() const {
  require(num_inputs >= 1, "switch: num_inputs must be >= 1");
  require(num_outputs >= 1, "switch: num_outputs must be >= 1");
  require(num_banks >= 1, "switch: num_banks must be >= 1");
  require(std::isfinite(bank_capacitance) && bank_capacitance > 0.0, "switch: bank_capacitance must be > 0");
  require(std::isfinite(rated_voltage) && rated_voltage > 0.0, "switch: rated_voltage must be > 0");
  require(std::isfinite(max_bank_voltage), "switch: max_bank_voltage must be finite");
  require(rated_voltage <= max_bank_voltage, "switch: rated_voltage must not exceed max_bank_voltage");
}

}  // namespace eps::core
