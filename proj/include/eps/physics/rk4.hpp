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

#include <array>
#include <cstddef>

namespace eps::physics {

template <std::size_t N>
using OdeState = std::array<double, N>;

/// One classical fourth-order Runge-Kutta step of size h for y' = f(t, y).
template <std::size_t N, class Derivative>
OdeState<N> rk4_step(const Derivative& f, double t, const OdeState<N>& y, double h) {
  auto axpy = [](const OdeState<N>& base, double scale, const OdeState<N>& dir) {
    OdeState<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + scale * dir[i];
    return out;
  };
  const OdeState<N> k1 = f(t, y);
  const OdeState<N> k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const OdeState<N> k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const OdeState<N> k4 = f(t + h, axpy(y, h, k3));
  OdeState<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
  return out;
}

}  // namespace eps::physics
