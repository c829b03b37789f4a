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

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hwpd/common.hpp"
#include "hwpd/emd.hpp"
#include "hwpd/ingest.hpp"

namespace hwpd::featurize {

inline constexpr const char* kFunctionalNames[] = {"mean", "median", "std",
                                                   "p1",   "p99",    "range"};

// Linear interpolation between closest ranks with inclusive endpoints
// (position q/100 * (n - 1)); `sorted` must be ascending and non-empty.
double percentile(std::span<const double> sorted, double q);

// mean, median, population std, 1st and 99th percentile and their
// difference, named `<name>.<functional>`. Empty input gives six missing.
std::vector<ScalarFeature> apply_functionals(std::string_view name,
                                             std::span<const double> values);

struct ExtractionOptions {
  bool emd_snr_includes_residual = true;
  // Called with every decomposition computed, keyed by channel name.
  std::function<void(std::string_view, const emd::Decomposition&)>
      on_decomposition;
};

// Complete flattened feature vector of one recording for one modality.
// Names are stable across recordings; unavailable values are missing.
std::vector<ScalarFeature> extract_features(const ingest::PenRecording& rec,
                                            ingest::Modality modality,
                                            const ExtractionOptions& options = {});

struct SubjectFeatures {
  std::string subject_id;
  ingest::Label label = ingest::Label::kUnlabeled;
  int task_id = 1;
  ingest::Modality modality = ingest::Modality::kOnSurface;
  std::vector<ScalarFeature> features;
};

// Subjects x features with NaN marking missing cells. task_id 0 denotes the
// all-tasks concatenation.
struct FeatureMatrix {
  std::vector<std::string> feature_names;
  std::vector<std::string> subject_ids;
  std::vector<int> labels;  // 1 PD, 0 control
  int task_id = 0;
  ingest::Modality modality = ingest::Modality::kOnSurface;
  Matrix values;

  std::size_t rows() const { return values.rows; }
  std::size_t cols() const { return values.cols; }
  bool missing(std::size_t r, std::size_t c) const;
};

// Rows in subject order of first appearance, columns sorted by name.
// Entries for other tasks or modalities are ignored; unlabeled subjects are
// excluded with a warning.
FeatureMatrix assemble(std::span<const SubjectFeatures> cohort, int task_id,
                       ingest::Modality modality,
                       const WarningSink& warn = default_warning);

// Column-wise concatenation of per-task matrices of one modality over their
// common subjects. Columns are prefixed `t<task>.`.
FeatureMatrix concatenate_tasks(std::span<const FeatureMatrix> per_task,
                                const WarningSink& warn = default_warning);

FeatureMatrix select_columns(const FeatureMatrix& m,
                             std::span<const std::size_t> columns);

// CSV: optional '#' metadata line, header `subject_id,label,<features>`,
// labels PD/H, missing cells written as NA.
void write_matrix_csv(const FeatureMatrix& m, std::ostream& out,
                      std::string_view metadata = {});
FeatureMatrix read_matrix_csv(const std::filesystem::path& path, int task_id,
                              ingest::Modality modality);
std::string matrix_filename(int task_id, ingest::Modality modality);

}  // namespace hwpd::featurize
