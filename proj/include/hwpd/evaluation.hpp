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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hwpd/featurize.hpp"
#include "hwpd/svm.hpp"

namespace hwpd::svm {

enum class Protocol {
  kInFold,  // imputation, filtering and scaling fitted on training folds
  kPaper,   // the same preprocessing fitted once on the whole cohort
};

std::string protocol_name(Protocol p);

struct CvOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  Protocol protocol = Protocol::kInFold;
  bool filter = true;
  double alpha = 0.05;
  double max_missing_fraction = 0.5;
  bool nested = false;
  std::size_t inner_folds = 5;
  unsigned jobs = 1;
  SmoOptions smo;
};

struct CvReport {
  std::vector<double> fold_auc;
  double mean_auc = 0.5;
  RbfParams best;
  std::vector<RbfParams> fold_params;  // nested: per outer fold choice
  std::vector<double> grid_mean_auc;   // non-nested: one entry per grid point
  std::size_t grid_points = 0;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  Protocol protocol = Protocol::kInFold;
  bool nested = false;
  double max_kkt_residual = 0.0;
};

// Picks the grid point with the highest mean held-out AUC over stratified
// folds (first one on ties, grid order C-major) and reports its fold AUCs.
// With options.nested the selection runs inside each outer training fold
// and the outer folds give the estimate. Folds whose preprocessing keeps no
// feature score every held-out subject equally.
CvReport grid_search_cv(const featurize::FeatureMatrix& m, const Grid& grid,
                        const CvOptions& options,
                        const WarningSink& warn = default_warning);

struct CellResult {
  int task_id = 0;  // 0 = all tasks
  ingest::Modality modality = ingest::Modality::kOnSurface;
  bool available = false;
  std::size_t subjects = 0;
  std::size_t features_raw = 0;
  std::size_t features_kept = 0;  // whole-cohort U-test survivors
  std::optional<CvReport> cv;
};

struct ProtocolRun {
  Protocol protocol = Protocol::kInFold;
  bool nested = false;
  std::vector<CellResult> cells;  // modality-major, tasks 1..7 then all

  std::string label() const;
  const CellResult* find(int task_id, ingest::Modality m) const;
};

struct EvaluationReport {
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::size_t folds = 10;
  double alpha = 0.05;
  bool shuffled_labels = false;
  Grid grid;
  std::vector<ProtocolRun> runs;
};

struct EvaluateOptions {
  CvOptions cv;                       // protocol/nested fields are ignored
  std::vector<std::pair<Protocol, bool>> runs = {{Protocol::kInFold, false}};
  Grid grid = Grid::standard();
  bool shuffle_labels = false;
  std::string config_hash;
  unsigned jobs = 1;
};

// Keys are (task_id 1..7, modality).
using CohortMatrices =
    std::map<std::pair<int, ingest::Modality>, featurize::FeatureMatrix>;

// Evaluates the 3 x 8 grid of cells (tasks 1-7 plus their concatenation) for
// each requested protocol. A cell whose features all fail the whole-cohort
// U-test is reported as not available.
EvaluationReport evaluate_all(const CohortMatrices& matrices,
                              const EvaluateOptions& options,
                              const WarningSink& warn = default_warning);

// Permutes the labels of every matrix identically (subjects matched by id).
CohortMatrices shuffle_labels(const CohortMatrices& matrices,
                              std::uint64_t seed);

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const std::string& text);
// Table of AUC percentages per task and modality, "-" when not available.
std::string render_table(const EvaluationReport& report);

}  // namespace hwpd::svm
