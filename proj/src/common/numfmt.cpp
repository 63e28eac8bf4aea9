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

#include "eps/numfmt.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace eps {

void append_double(std::string& out, double value) {
  if (value == 0.0) value = 0.0;  // fold -0 so traces never print "-0"
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    out += "nan";
    return;
  }
  out.append(buf.data(), end);
}

std::string format_double(double value) {
  std::string s;
  append_double(s, value);
  return s;
}

bool parse_double(std::string_view text, double& value) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace eps
