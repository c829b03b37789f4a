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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hwpd/featurize.hpp"

namespace hwpd::featurize {

double percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("percentile of empty data");
  const double pos = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<ScalarFeature> apply_functionals(std::string_view name,
                                             std::span<const double> values) {
  std::vector<ScalarFeature> out;
  out.reserve(6);
  const std::string prefix = std::string(name) + ".";
  for (const char* f : kFunctionalNames) out.push_back({prefix + f, std::nullopt});
  if (values.empty()) return out;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double p1 = percentile(sorted, 1.0);
  const double p99 = percentile(sorted, 99.0);

  out[0].value = mean;
  out[1].value = percentile(sorted, 50.0);
  out[2].value = std::sqrt(ss / n);
  out[3].value = p1;
  out[4].value = p99;
  out[5].value = p99 - p1;
  for (auto& f : out)
    if (f.value && !std::isfinite(*f.value)) f.value.reset();
  return out;
}

}  // namespace hwpd::featurize
