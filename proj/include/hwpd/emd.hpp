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

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "hwpd/common.hpp"

namespace hwpd::emd {

// s == sum(imfs) + residual, elementwise.
struct Decomposition {
  std::vector<std::vector<double>> imfs;
  std::vector<double> residual;
  std::size_t source_length = 0;

  std::size_t size() const { return imfs.size(); }
};

struct SiftOptions {
  double sd_threshold = 0.2;      // Cauchy criterion per IMF
  int max_sift_iterations = 10;
  // Extra iterations allowed past max_sift_iterations while the candidate
  // still fails the extrema/zero-crossing condition.
  int max_repair_iterations = 200;
  std::size_t max_imfs = 10;
};

// Natural cubic spline through (knot_x, knot_y), evaluated at 0, 1, ..., n-1.
// knot_x must strictly increase and hold at least two knots.
std::vector<double> natural_spline(std::span<const double> knot_x,
                                   std::span<const double> knot_y,
                                   std::size_t n);

struct Extrema {
  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;
  std::size_t count() const { return maxima.size() + minima.size(); }
};

// Interior local extrema; a plateau counts once, located at its centre.
Extrema find_extrema(std::span<const double> s);
std::size_t count_zero_crossings(std::span<const double> s);
bool satisfies_imf_criterion(std::span<const double> s);
bool is_monotone(std::span<const double> s);

Decomposition sift(std::span<const double> s, const SiftOptions& options = {});

// Entropies, CE, TKE_1 and noise variance of IMF1 and IMF2, named
// `<channel>.imf<k>.<feature>`, plus `<channel>.isnr`.
std::vector<ScalarFeature> intrinsic_features(std::string_view channel,
                                              const Decomposition& d,
                                              bool snr_includes_residual = true);

// [CE(IMF1) + CE(IMF2)] / [sum_{j>=3} CE(IMF_j) (+ CE(residual))]. Missing
// with fewer than three IMFs or a zero denominator.
std::optional<double> intrinsic_snr(const Decomposition& d,
                                    bool include_residual = true);

// One column per IMF followed by the residual.
void write_decomposition_csv(const Decomposition& d, std::ostream& out);

}  // namespace hwpd::emd
