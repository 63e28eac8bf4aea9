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

#include <string>
#include <string_view>

namespace eps {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
void append_double(std::string& out, double value);

/// Strict parse of a whole string as a double; false on any trailing junk.
bool parse_double(std::string_view text, double& value);

}  // namespace eps
