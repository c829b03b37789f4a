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
#include <span>
#include <string>
#include <vector>

#include "hwpd/featurize.hpp"

namespace hwpd::featurize {

enum class PValueMethod {
  kAuto,    // exact for |A| + |B| <= kExactLimit, normal approximation above
  kExact,
  kNormal,  // tie and continuity corrected
};

inline constexpr std::size_t kExactLimit = 16;

struct MannWhitneyResult {
  double u = 0.0;  // min(U_A, U_B) with midranks
  double u_a = 0.0;
  double p_two_sided = 1.0;
  bool exact = false;
};

// Two-sided Mann-Whitney U test. The exact p-value counts every split of the
// pooled (midranked) sample whose |U - nm/2| is at least the observed one.
// Requires at least two values per group.
MannWhitneyResult mann_whitney_u(std::span<const double> a,
                                 std::span<const double> b,
                                 PValueMethod method = PValueMethod::kAuto);

// Midranks (1-based) of a sample.
std::vector<double> midranks(std::span<const double> values);

struct FilterReport {
  double alpha = 0.05;
  std::vector<std::string> names;
  std::vector<double> u;
  std::vector<double> p;
  std::vector<bool> kept;

  std::size_t kept_count() const;
};

// U-test per column on the non-missing values of each class; columns with
// fewer than two values in a class get p = 1. The returned matrix holds the
// kept columns and may have none.
std::pair<FeatureMatrix, FilterReport> filter_features(
    const FeatureMatrix& m, double alpha = 0.05);

// Same test restricted to the given rows.
FilterReport test_columns(const FeatureMatrix& m,
                          std::span<const std::size_t> rows, double alpha);

void write_filter_report_csv(const FilterReport& report, std::ostream& out,
                             std::string_view metadata = {});

// Imputation, optional U-test selection and z-scoring fitted on a subset of
// rows and applied to any row.
class Preprocessor {
 public:
  struct Options {
    double max_missing_fraction = 0.5;
    bool filter = true;
    double alpha = 0.05;
  };

  static Preprocessor fit(const FeatureMatrix& m,
                          std::span<const std::size_t> train_rows,
                          const Options& options);

  // Selected source columns; empty when nothing survived.
  const std::vector<std::size_t>& columns() const { return columns_; }
  const std::vector<double>& means() const { return mean_; }
  const std::vector<double>& scales() const { return scale_; }

  Matrix transform(const FeatureMatrix& m,
                   std::span<const std::size_t> rows) const;

 private:
  std::vector<std::size_t> columns_;
  std::vector<double> fill_;
  std::vector<double> mean_;
  std::vector<double> scale_;
};

}  // namespace hwpd::featurize
