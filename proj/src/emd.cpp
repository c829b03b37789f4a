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

#include "hwpd/emd.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hwpd/nonlinear.hpp"

namespace hwpd::emd {

std::vector<double> natural_spline(std::span<const double> knot_x,
                                   std::span<const double> knot_y,
                                   std::size_t n) {
  const std::size_t m = knot_x.size();
  if (m < 2 || knot_y.size() != m)
    throw std::invalid_argument("spline needs at least two knots");
  std::vector<double> h(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    h[i] = knot_x[i + 1] - knot_x[i];
    if (!(h[i] > 0.0))
      throw std::invalid_argument("spline knots must strictly increase");
  }
  // Second derivatives M with M[0] = M[m-1] = 0 (Thomas algorithm).
  std::vector<double> M(m, 0.0);
  if (m > 2) {
    const std::size_t k = m - 2;
    std::vector<double> diag(k), upper(k), rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
      diag[i] = 2.0 * (h[i] + h[i + 1]);
      upper[i] = h[i + 1];
      rhs[i] = 6.0 * ((knot_y[i + 2] - knot_y[i + 1]) / h[i + 1] -
                      (knot_y[i + 1] - knot_y[i]) / h[i]);
    }
    for (std::size_t i = 1; i < k; ++i) {
      double w = h[i] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    M[k] = rhs[k - 1] / diag[k - 1];
    for (std::size_t i = k - 1; i-- > 0;)
      M[i + 1] = (rhs[i] - upper[i] * M[i + 2]) / diag[i];
  }
  std::vector<double> out(n);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = static_cast<double>(j);
    while (seg + 2 < m && x > knot_x[seg + 1]) ++seg;
    const double a = knot_x[seg + 1] - x;
    const double b = x - knot_x[seg];
    const double hs = h[seg];
    out[j] = (M[seg] * a * a * a + M[seg + 1] * b * b * b) / (6.0 * hs) +
             (knot_y[seg] / hs - M[seg] * hs / 6.0) * a +
             (knot_y[seg + 1] / hs - M[seg + 1] * hs / 6.0) * b;
  }
  return out;
}

Extrema find_extrema(std::span<const double> s) {
  Extrema e;
  const std::size_t n = s.size();
  std::size_t i = 0;
  // Walk constant runs [i, j) and compare with the neighbouring runs.
  bool have_prev = false;
  double prev_value = 0.0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && s[j] == s[i]) ++j;
    if (have_prev && j < n) {
      const double next_value = s[j];
      if (s[i] > prev_value && s[i] > next_value)
        e.maxima.push_back((i + j - 1) / 2);
      else if (s[i] < prev_value && s[i] < next_value)
        e.minima.push_back((i + j - 1) / 2);
    }
    have_prev = true;
    prev_value = s[i];
    i = j;
  }
  return e;
}

std::size_t count_zero_crossings(std::span<const double> s) {
  std::size_t count = 0;
  int last = 0;
  for (double v : s) {
    int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++count;
    last = sign;
  }
  return count;
}

bool satisfies_imf_criterion(std::span<const double> s) {
  auto ext = static_cast<long long>(find_extrema(s).count());
  auto zc = static_cast<long long>(count_zero_crossings(s));
  return std::llabs(ext - zc) <= 1;
}

bool is_monotone(std::span<const double> s) {
  bool up = true, down = true;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] < s[i - 1]) up = false;
    if (s[i] > s[i - 1]) down = false;
  }
  return up || down;
}

namespace {

// Envelope through the given extrema, with the two extrema nearest each end
// mirrored past the boundary.
std::vector<double> envelope(std::span<const double> s,
                             const std::vector<std::size_t>& idx) {
  const std::size_t n = s.size();
  const double last = static_cast<double>(n - 1);
  std::vector<double> kx, ky;
  const std::size_t k = idx.size();
  const std::size_t mirror = std::min<std::size_t>(2, k);
  for (std::size_t q = mirror; q-- > 0;) {
    kx.push_back(-static_cast<double>(idx[q]));
    ky.push_back(s[idx[q]]);
  }
  for (std::size_t q = 0; q < k; ++q) {
    kx.push_back(static_cast<double>(idx[q]));
    ky.push_back(s[idx[q]]);
  }
  for (std::size_t q = 0; q < mirror; ++q) {
    std::size_t src = idx[k - 1 - q];
    kx.push_back(2.0 * last - static_cast<double>(src));
    ky.push_back(s[src]);
  }
  return natural_spline(kx, ky, n);
}

}  // namespace

Decomposition sift(std::span<const double> s, const SiftOptions& options) {
  Decomposition d;
  d.source_length = s.size();
  d.residual.assign(s.begin(), s.end());
  if (s.size() < 8 || find_extrema(s).count() < 4) return d;

  const std::size_t n = s.size();
  double peak = 0.0;
  for (double v : s) peak = std::max(peak, std::fabs(v));
  // Residuals at rounding level are treated as zero.
  const double floor = 1e-10 * peak;
  auto negligible = [&](const std::vector<double>& r) {
    for (double v : r)
      if (std::fabs(v) > floor) return false;
    return true;
  };
  while (d.imfs.size() < options.max_imfs) {
    const Extrema re = find_extrema(d.residual);
    if (re.count() < 3 || is_monotone(d.residual) || negligible(d.residual))
      break;

    std::vector<double> h = d.residual;
    const int cap = options.max_sift_iterations + options.max_repair_iterations;
    for (int it = 0; it < cap; ++it) {
      const Extrema e = find_extrema(h);
      if (e.maxima.empty() || e.minima.empty()) break;
      std::vector<double> upper = envelope(h, e.maxima);
      std::vector<double> lower = envelope(h, e.minima);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double mean = 0.5 * (upper[i] + lower[i]);
        num += mean * mean;
        den += h[i] * h[i];
        h[i] -= mean;
      }
      const bool converged =
          den > 0.0 ? num / den < options.sd_threshold : true;
      const bool out_of_budget = it + 1 >= options.max_sift_iterations;
      if ((converged || out_of_budget) && satisfies_imf_criterion(h)) break;
    }
    for (std::size_t i = 0; i < n; ++i) d.residual[i] -= h[i];
    d.imfs.push_back(std::move(h));
  }
  return d;
}

std::optional<double> intrinsic_snr(const Decomposition& d,
                                    bool include_residual) {
  if (d.imfs.size() < 3) return std::nullopt;
  double num = nonlinear::conventional_energy(d.imfs[0]) +
               nonlinear::conventional_energy(d.imfs[1]);
  double den = 0.0;
  for (std::size_t j = 2; j < d.imfs.size(); ++j)
    den += nonlinear::conventional_energy(d.imfs[j]);
  if (include_residual && !d.residual.empty())
    den += nonlinear::conventional_energy(d.residual);
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

std::vector<ScalarFeature> intrinsic_features(std::string_view channel,
                                              const Decomposition& d,
                                              bool snr_includes_residual) {
  std::vector<ScalarFeature> out;
  for (std::size_t k = 0; k < 2; ++k) {
    const std::string p =
        std::string(channel) + ".imf" + std::to_string(k + 1) + ".";
    const bool ok = k < d.imfs.size() && d.imfs[k].size() >= 4;
    std::span<const double> imf;
    if (ok) imf = d.imfs[k];
    auto opt = [ok](auto f) -> std::optional<double> {
      if (!ok) return std::nullopt;
      return f();
    };
    out.push_back({p + "shannon", opt([&] { return nonlinear::shannon_entropy(imf); })});
    out.push_back({p + "renyi2", opt([&] { return nonlinear::renyi_entropy(imf, 2); })});
    out.push_back({p + "renyi3", opt([&] { return nonlinear::renyi_entropy(imf, 3); })});
    out.push_back({p + "ce", opt([&] { return nonlinear::conventional_energy(imf); })});
    out.push_back({p + "tke1", ok ? nonlinear::teager_kaiser_energy(imf, 1)
                                  : std::nullopt});
    out.push_back({p + "noise", opt([&] { return nonlinear::noise_variance(imf); })});
  }
  out.push_back({std::string(channel) + ".isnr",
                 intrinsic_snr(d, snr_includes_residual)});
  return out;
}

void write_decomposition_csv(const Decomposition& d, std::ostream& out) {
  const auto old_precision = out.precision(17);
  for (std::size_t k = 0; k < d.imfs.size(); ++k)
    out << "imf" << (k + 1) << ',';
  out << "residual\n";
  for (std::size_t i = 0; i < d.residual.size(); ++i) {
    for (const auto& imf : d.imfs) out << imf[i] << ',';
    out << d.residual[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace hwpd::emd
