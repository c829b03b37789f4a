// Copyright 2026 The hwpd Authors
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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hwpd::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;
inline constexpr int kDataError = 3;
inline constexpr int kConvergenceError = 4;

// Entry point for `hwpd <synth|extract|filter|evaluate|report> ...`.
// Logs go to standard error; tables to standard output.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

// 64-bit FNV-1a of the canonical configuration text, as 16 hex digits.
std::string config_hash(std::string_view canonical);

}  // namespace hwpd::cli
