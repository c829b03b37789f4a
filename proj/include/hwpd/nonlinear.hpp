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

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hwpd/common.hpp"

namespace hwpd::nonlinear {

// ceil(sqrt(n)) equal-width bins over [min, max].
std::size_t default_bin_count(std::size_t n);

// Plug-in probability estimate over `bins` equal-width bins spanning the
// sample range; a constant signal puts all mass in one bin.
std::vector<double> histogram_probabilities(std::span<const double> s,
                                            std::size_t bins);

// Natural-log entropies on the default histogram. Require at least four
// samples (std::invalid_argument otherwise).
double shannon_entropy(std::span<const double> s);
double shannon_entropy(std::span<const double> s, std::size_t bins);
double renyi_entropy(std::span<const double> s, int order);
double renyi_entropy(std::span<const double> s, int order, std::size_t bins);

// CE = mean of squares.
double conventional_energy(std::span<const double> s);

// Mean of s[n]^2 - s[n+r] s[n-r] over n in [r, N-r-1]; missing when
// N < 2r + 2.
std::optional<double> teager_kaiser_energy(std::span<const double> s,
                                           std::size_t lag);

// First-difference noise estimate sum (s[n+1]-s[n])^2 / (2 (N-1)).
double noise_variance(std::span<const double> s);

struct EnergyKind {
  enum class Operator { kConventional, kTeagerKaiser } op =
      Operator::kConventional;
  std::size_t lag = 1;
};

// Energy over noise variance; missing for a zero noise estimate.
std::optional<double> snr(std::span<const double> s, EnergyKind kind);

inline constexpr std::size_t kTkeLags[] = {1, 2, 3};

// Full entropy/energy/noise/SNR feature set of one channel, named
// `<channel>.<feature>`. Too-short channels yield missing values.
std::vector<ScalarFeature> channel_features(std::string_view channel,
                                            std::span<const double> s);

}  // namespace hwpd::nonlinear
