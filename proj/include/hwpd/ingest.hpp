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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hwpd/common.hpp"

namespace hwpd::ingest {

// Full-scale pressure in device units. Feature code works on p / kMaxPressure.
inline constexpr int kMaxPressure = 1024;

enum class Label { kPD, kControl, kUnlabeled };

// One digitizer sample. Azimuth and altitude are carried only so files
// round-trip; no feature reads them.
struct PenSample {
  int x = 0;
  int y = 0;
  std::int64_t t_ms = 0;
  int pen_state = 0;  // 1 on-surface, 0 in-air
  int azimuth = 0;
  int altitude = 0;
  int pressure = 0;

  bool on_surface() const { return pen_state == 1; }
  friend bool operator==(const PenSample&, const PenSample&) = default;
};

struct PenRecording {
  std::string subject_id;
  int task_id = 1;
  std::vector<PenSample> samples;
  Label label = Label::kUnlabeled;

  // t[last] - t[first] in seconds, 0 for fewer than two samples.
  double duration_seconds() const;
};

enum class StrokeKind { kOnSurface, kInAir };

// Maximal run of constant pen state; indices are inclusive.
struct StrokeSegment {
  StrokeKind kind = StrokeKind::kOnSurface;
  std::size_t start_index = 0;
  std::size_t end_index = 0;
  double duration = 0.0;  // seconds

  std::size_t size() const { return end_index - start_index + 1; }
};

enum class Modality { kOnSurface, kInAir, kPressure };

inline constexpr Modality kAllModalities[] = {
    Modality::kOnSurface, Modality::kInAir, Modality::kPressure};

std::string_view modality_name(Modality m);
Modality parse_modality(std::string_view name);

// Half-open range of view-local sample indices.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

// Projection of a recording onto one modality. On-surface and in-air views
// fill x and y; the pressure view fills p (normalized by kMaxPressure) over
// the on-surface samples. Samples of consecutive strokes are concatenated;
// `strokes` locates each contributing stroke inside the view.
struct ModalityView {
  Modality modality = Modality::kOnSurface;
  std::vector<double> time;  // seconds
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> p;
  std::vector<std::size_t> source_index;
  std::vector<StrokeSegment> source_strokes;
  std::vector<Span> strokes;
  double task_duration = 0.0;  // seconds, whole recording

  std::size_t size() const { return time.size(); }
  bool empty() const { return time.empty(); }
};

// Parses the `.svc`-style text format: a sample-count line followed by that
// many lines of `x y t pen_state azimuth altitude pressure`. Subject and task
// are taken from a `<subject>__<task>.svc` filename when present.
// Throws DataError on malformed input (the message names the line).
PenRecording parse_recording(const std::filesystem::path& path,
                             const WarningSink& warn = default_warning);
PenRecording parse_recording(std::istream& in, std::string subject_id,
                             int task_id,
                             const WarningSink& warn = default_warning);

void write_recording(const PenRecording& rec, std::ostream& out);
void write_recording(const PenRecording& rec,
                     const std::filesystem::path& path);

std::string recording_filename(std::string_view subject_id, int task_id);

// Checks the PenRecording invariants, throwing DataError on violation.
void validate(const PenRecording& rec);

std::vector<StrokeSegment> segment_strokes(const PenRecording& rec);

ModalityView project_modality(const PenRecording& rec, Modality modality);

struct ManifestEntry {
  std::string subject_id;
  Label label = Label::kUnlabeled;
};

// CSV with header `subject_id,label`, label in {PD, H}. Lines starting with
// '#' are metadata comments.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<ManifestEntry>& entries,
                    std::ostream& out);

std::string label_token(Label label);
Label parse_label(std::string_view token);

// Synthetic cohort generator standing in for clinical recordings: n_pd
// parkinsonian and n_control healthy subjects, seven tasks each. Output is a
// pure function of the arguments.
std::vector<PenRecording> synthesize_cohort(int n_pd, int n_control,
                                            std::uint64_t seed);

}  // namespace hwpd::ingest
