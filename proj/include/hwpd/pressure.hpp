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

#include <span>
#include <vector>

#include "hwpd/common.hpp"
#include "hwpd/ingest.hpp"

namespace hwpd::pressure {

// Inclusive-exclusive index ranges into one stroke's pressure sequence.
struct PressureStrokeParts {
  ingest::Span rising;
  ingest::Span main;
  ingest::Span falling;
  double threshold = 0.0;  // median pressure of the stroke
};

// Mean of the two central order statistics for even lengths.
double median(std::span<const double> values);

// dp/dt of normalized pressure, differentiated inside each stroke.
TimeSeriesFeature pressure_rate(const ingest::ModalityView& view);

// NCP (extrema of dp/dt, summed over strokes) and NCP per tablet unit of
// writing length.
std::vector<ScalarFeature> ncp(const ingest::ModalityView& view,
                               double writing_length);

// Pearson correlation; std::nullopt when either side has zero variance or
// fewer than three points.
std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b);

// Correlations of pressure with |v|, vx, vy, |a|, ax, ay over the on-surface
// samples. Pressure is truncated to the derivative grid of each stroke (one
// trailing sample dropped for velocity, two for acceleration).
std::vector<ScalarFeature> pressure_correlations(
    const ingest::PenRecording& rec);

// Rising edge ends at the first sample reaching the median, falling edge
// starts at the last one. Strokes shorter than three samples are all main.
PressureStrokeParts split_pressure_stroke(std::span<const double> p);

// Part statistics (mean, std, duration, mean rate for rising/main/falling)
// followed by rising/falling pressure and time ranges. 16 features.
std::vector<ScalarFeature> edge_features(const PressureStrokeParts& parts,
                                         std::span<const double> p,
                                         std::span<const double> time);

// edge_features for every stroke of a pressure view, as per-stroke sequences.
std::vector<TimeSeriesFeature> stroke_edge_features(
    const ingest::ModalityView& view);

}  // namespace hwpd::pressure
