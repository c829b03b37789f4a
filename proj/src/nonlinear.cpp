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

#include "hwpd/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hwpd::nonlinear {

std::size_t default_bin_count(std::size_t n) {
  if (n == 0) return 1;
  auto b = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  while (b * b < n) ++b;
  while (b > 1 && (b - 1) * (b - 1) >= n) --b;
  return b;
}

std::vector<double> histogram_probabilities(std::span<const double> s,
                                            std::size_t bins) {
  if (s.empty()) return {};
  if (bins == 0) throw std::invalid_argument("histogram needs at least 1 bin");
  auto [lo_it, hi_it] = std::minmax_element(s.begin(), s.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> counts(bins, 0.0);
  if (!(hi > lo)) {
    counts[0] = 1.0;
    return counts;
  }
  const double width = hi - lo;
  // Multiply before dividing so values on a bin edge land exactly.
  for (double v : s) {
    auto k = static_cast<std::size_t>(
        std::floor((v - lo) * static_cast<double>(bins) / width));
    counts[std::min(k, bins - 1)] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(s.size());
  return counts;
}

namespace {

void require_entropy_length(std::span<const double> s) {
  if (s.size() < 4)
    throw std::invalid_argument("entropy needs at least 4 samples");
}

double shannon_from(const std::vector<double>& prob) {
  double h = 0.0;
  for (double p : prob)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double renyi_from(const std::vector<double>& prob, int order) {
  double sum = 0.0;
  for (double p : prob)
    if (p > 0.0) sum += std::pow(p, order);
  return std::log(sum) / (1.0 - order);
}

}  // namespace

double shannon_entropy(std::span<const double> s, std::size_t bins) {
  require_entropy_length(s);
  return shannon_from(histogram_probabilities(s, bins));
}

double shannon_entropy(std::span<const double> s) {
  return shannon_entropy(s, default_bin_count(s.size()));
}

double renyi_entropy(std::span<const double> s, int order, std::size_t bins) {
  require_entropy_length(s);
  if (order < 2) throw std::invalid_argument("Renyi order must be >= 2");
  return renyi_from(histogram_probabilities(s, bins), order);
}

double renyi_entropy(std::span<const double> s, int order) {
  return renyi_entropy(s, order, default_bin_count(s.size()));
}

double conventional_energy(std::span<const double> s) {
  if (s.empty()) throw std::invalid_argument("energy of an empty signal");
  double sum = 0.0;
  for (double v : s) sum += v * v;
  return sum / static_cast<double>(s.size());
}

std::optional<double> teager_kaiser_energy(std::span<const double> s,
                                           std::size_t lag) {
  if (lag == 0) throw std::invalid_argument("TKE lag must be positive");
  if (s.size() < 2 * lag + 2) return std::nullopt;
  double sum = 0.0;
  const std::size_t last = s.size() - lag - 1;
  for (std::size_t n = lag; n <= last; ++n)
    sum += s[n] * s[n] - s[n + lag] * s[n - lag];
  return sum / static_cast<double>(last - lag + 1);
}

double noise_variance(std::span<const double> s) {
  if (s.size() < 2) throw std::invalid_argument("noise variance needs 2 samples");
  double sum = 0.0;
  for (std::size_t n = 0; n + 1 < s.size(); ++n) {
    double d = s[n + 1] - s[n];
    sum += d * d;
  }
  return sum / (2.0 * static_cast<double>(s.size() - 1));
}

std::optional<double> snr(std::span<const double> s, EnergyKind kind) {
  if (s.size() < 2) return std::nullopt;
  double noise = noise_variance(s);
  if (!(noise > 0.0)) return std::nullopt;
  if (kind.op == EnergyKind::Operator::kConventional)
    return conventional_energy(s) / noise;
  auto tke = teager_kaiser_energy(s, kind.lag);
  if (!tke) return std::nullopt;
  return *tke / noise;
}

std::vector<ScalarFeature> channel_features(std::string_view channel,
                                            std::span<const double> s) {
  const std::string p = std::string(channel) + ".";
  const bool ok = s.size() >= 4;
  std::vector<ScalarFeature> out;
  auto opt = [ok](auto f) -> std::optional<double> {
    if (!ok) return std::nullopt;
    return f();
  };
  out.push_back({p + "shannon", opt([&] { return shannon_entropy(s); })});
  out.push_back({p + "renyi2", opt([&] { return renyi_entropy(s, 2); })});
  out.push_back({p + "renyi3", opt([&] { return renyi_entropy(s, 3); })});
  out.push_back({p + "ce", opt([&] { return conventional_energy(s); })});
  for (std::size_t lag : kTkeLags)
    out.push_back({p + "tke" + std::to_string(lag),
                   ok ? teager_kaiser_energy(s, lag) : std::nullopt});
  out.push_back({p + "noise", opt([&] { return noise_variance(s); })});
  out.push_back({p + "snr_ce", ok ? snr(s, {}) : std::nullopt});
  for (std::size_t lag : kTkeLags)
    out.push_back(
        {p + "snr_tke" + std::to_string(lag),
         ok ? snr(s, {EnergyKind::Operator::kTeagerKaiser, lag}) : std::nullopt});
  return out;
}

}  // namespace hwpd::nonlinear
