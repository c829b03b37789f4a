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

// Brute-force reference implementations used by the tests. Each is written
// independently of the library code paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

inline std::vector<double> finite_difference(const std::vector<double>& s,
                                             const std::vector<double>& t) {
  std::vector<double> d;
  for (std::size_t i = 1; i < s.size(); ++i)
    d.push_back((s[i] - s[i - 1]) / (t[i] - t[i - 1]));
  return d;
}

// Histogram counts by explicit edge comparison; the top edge is closed.
inline std::vector<long> histogram_counts(const std::vector<double>& s,
                                          std::size_t bins) {
  double lo = s[0], hi = s[0];
  for (double v : s) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<long> counts(bins, 0);
  if (hi == lo) {
    counts[0] = static_cast<long>(s.size());
    return counts;
  }
  for (double v : s) {
    std::size_t k = 0;
    // v - lo >= (k + 1) / bins of the range, cross-multiplied.
    const long double rel = static_cast<long double>(v) - lo;
    while (k + 1 < bins &&
           rel * static_cast<long double>(bins) >=
               (static_cast<long double>(hi) - lo) * static_cast<long double>(k + 1))
      ++k;
    ++counts[k];
  }
  return counts;
}

inline std::size_t sqrt_bins(std::size_t n) {
  std::size_t b = 1;
  while (b * b < n) ++b;
  return b;
}

// H = ln N - (1/N) sum c ln c
inline double shannon(const std::vector<double>& s, std::size_t bins) {
  auto counts = histogram_counts(s, bins);
  const long double n = static_cast<long double>(s.size());
  long double acc = 0;
  for (long c : counts)
    if (c > 0) acc += c * std::log(static_cast<long double>(c));
  return static_cast<double>(std::log(n) - acc / n);
}

inline double renyi(const std::vector<double>& s, int order, std::size_t bins) {
  auto counts = histogram_counts(s, bins);
  const long double n = static_cast<long double>(s.size());
  long double acc = 0;
  for (long c : counts) acc += std::pow(static_cast<long double>(c), order);
  return static_cast<double>((std::log(acc) - order * std::log(n)) / (1 - order));
}

inline double ce(const std::vector<double>& s) {
  long double acc = 0;
  for (auto it = s.rbegin(); it != s.rend(); ++it) acc += (*it) * (*it);
  return static_cast<double>(acc / s.size());
}

inline double tke(const std::vector<double>& s, std::size_t r) {
  long double acc = 0;
  std::size_t terms = 0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (n < r || n + r >= s.size()) continue;
    acc += static_cast<long double>(s[n]) * s[n] -
           static_cast<long double>(s[n + r]) * s[n - r];
    ++terms;
  }
  return static_cast<double>(acc / terms);
}

inline double noise(const std::vector<double>& s) {
  long double acc = 0;
  for (std::size_t n = 1; n < s.size(); ++n) {
    long double d = s[n] - s[n - 1];
    acc += d * d;
  }
  return static_cast<double>(acc / (2.0L * (s.size() - 1)));
}

// Twice the midrank of each value in the pooled sample (integers).
inline std::vector<long> doubled_ranks(const std::vector<double>& pooled) {
  std::vector<long> r(pooled.size());
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    long below = 0, equal = 0;
    for (double v : pooled) {
      if (v < pooled[i]) ++below;
      if (v == pooled[i]) ++equal;
    }
    r[i] = 2 * below + equal + 1;
  }
  return r;
}

struct ExactP {
  long numerator = 0;
  long denominator = 0;
  double value() const { return static_cast<double>(numerator) / denominator; }
};

// Two-sided exact p by enumerating every assignment of the pooled midranks
// to a group of size |a|.
inline ExactP mann_whitney_exact(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto r2 = doubled_ranks(pooled);
  const long n = static_cast<long>(a.size()), m = static_cast<long>(b.size());
  auto twice_u = [&](const std::vector<bool>& in_a) {
    long s = 0;
    for (std::size_t i = 0; i < pooled.size(); ++i)
      if (in_a[i]) s += r2[i];
    return s - n * (n + 1);  // 2 U_A
  };
  std::vector<bool> obs(pooled.size(), false);
  std::fill(obs.begin(), obs.begin() + n, true);
  const long dev_obs = std::labs(2 * twice_u(obs) - 2 * n * m);
  std::vector<bool> sel(pooled.size(), false);
  std::fill(sel.end() - n, sel.end(), true);
  ExactP p;
  do {
    ++p.denominator;
    if (std::labs(2 * twice_u(sel) - 2 * n * m) >= dev_obs) ++p.numerator;
  } while (std::next_permutation(sel.begin(), sel.end()));
  return p;
}

// Monte-Carlo permutation p for the same statistic.
inline double mann_whitney_permutation(const std::vector<double>& a,
                                       const std::vector<double>& b,
                                       int permutations, std::uint64_t seed) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto r2 = doubled_ranks(pooled);
  const long n = static_cast<long>(a.size()), m = static_cast<long>(b.size());
  std::vector<long> idx(pooled.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto dev = [&]() {
    long s = 0;
    for (long i = 0; i < n; ++i) s += r2[idx[i]];
    return std::labs(2 * (s - n * (n + 1)) - 2 * n * m);
  };
  const long dev_obs = dev();
  std::mt19937_64 rng(seed);
  long hits = 0;
  for (int k = 0; k < permutations; ++k) {
    std::shuffle(idx.begin(), idx.end(), rng);
    if (dev() >= dev_obs) ++hits;
  }
  return static_cast<double>(hits) / permutations;
}

// AUC as the fraction of positive/negative pairs won, ties worth one half.
// Returned as (2 * wins, pairs) to allow exact comparison.
inline std::pair<std::uint64_t, std::uint64_t> auc_pairs(
    const std::vector<double>& scores, const std::vector<int>& labels) {
  std::uint64_t twice = 0, pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] <= 0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] > 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) twice += 2;
      else if (scores[i] == scores[j]) twice += 1;
    }
  }
  return {twice, pairs};
}

// Power at frequency f (Hz) by direct DFT sum.
inline double periodogram(const std::vector<double>& s, double fs, double f) {
  std::complex<double> acc = 0;
  const double w = 2.0 * M_PI * f / fs;
  for (std::size_t n = 0; n < s.size(); ++n)
    acc += s[n] * std::polar(1.0, -w * static_cast<double>(n));
  return std::norm(acc) / static_cast<double>(s.size());
}

// Linear-interpolation percentile on sorted data, q in [0, 1].
inline double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    saa += a[i] * a[i];
    sbb += b[i] * b[i];
    sab += a[i] * b[i];
  }
  return (n * sab - sa * sb) / std::sqrt((n * saa - sa * sa) * (n * sbb - sb * sb));
}

inline std::size_t local_extrema(const std::vector<double>& v) {
  // Compress runs, then count strict interior turns.
  std::vector<double> c;
  for (double x : v)
    if (c.empty() || c.back() != x) c.push_back(x);
  std::size_t k = 0;
  for (std::size_t i = 1; i + 1 < c.size(); ++i)
    if ((c[i] > c[i - 1]) == (c[i] > c[i + 1])) ++k;
  return k;
}

inline double relative_error(double got, double want) {
  return std::fabs(got - want) / std::max(1e-300, std::fabs(want));
}

}  // namespace oracle
