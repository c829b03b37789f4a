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

namespace hwpd::kinematics {

// First differences ds/dt on the true time base; element i sits at the
// midpoint of [t[i], t[i+1]]. Returns an empty vector when fewer than two
// samples are given. Throws std::invalid_argument if time does not strictly
// increase or the lengths differ.
std::vector<double> derivative(std::span<const double> series,
                               std::span<const double> time);

// Interval midpoints of a time axis (length n - 1).
std::vector<double> midpoints(std::span<const double> time);

// Number of local extrema. A maximal constant run counts once when it lies
// strictly above (maximum) or below (minimum) both neighbouring runs; runs
// touching either end never count.
std::size_t count_local_extrema(std::span<const double> values);

// Velocity, acceleration and jerk sequences. Differences are taken inside
// each stroke so pen-state transitions never produce spurious jumps. Emits
// nine features in fixed order: velocity, vx, vy, acceleration, ax, ay,
// jerk, jx, jy. A view with fewer than three samples yields all nine missing.
std::vector<TimeSeriesFeature> velocity_features(
    const ingest::ModalityView& view);

// NCV, relative NCV, NCA, relative NCA. Counts are summed over strokes;
// relative values divide by the task duration in seconds.
std::vector<ScalarFeature> ncv_nca(const ingest::ModalityView& view);

// Per-stroke height, width, duration, path length and speed. Strokes with
// fewer than two samples are skipped.
std::vector<TimeSeriesFeature> stroke_features(
    const ingest::ModalityView& view);

double path_length(std::span<const double> x, std::span<const double> y);

struct SpatioTemporal {
  double writing_duration = 0.0;  // seconds on surface
  double air_duration = 0.0;      // seconds in air
  double writing_length = 0.0;    // tablet units on surface
  double air_length = 0.0;
  std::optional<double> writing_speed;
  std::optional<double> air_speed;
  std::optional<double> air_to_surface_ratio;
};

SpatioTemporal global_spatiotemporal(const ingest::PenRecording& rec);

// Scalar features of one movement modality as named in the feature manifest.
std::vector<ScalarFeature> spatiotemporal_features(const SpatioTemporal& st,
                                                   ingest::Modality modality);

}  // namespace hwpd::kinematics
