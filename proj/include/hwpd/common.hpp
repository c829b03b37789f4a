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

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hwpd {

inline constexpr const char* kToolVersion = "0.1.0";

// A named scalar; std::nullopt marks a missing value. Present values are
// always finite.
struct ScalarFeature {
  std::string name;
  std::optional<double> value;
};

// A named sequence sampled on a time axis (seconds). Per-stroke sequences use
// the stroke start times as their axis.
struct TimeSeriesFeature {
  std::string name;
  std::vector<double> values;
  std::vector<double> time;

  bool missing() const { return values.empty(); }
};

// Builds a TimeSeriesFeature, dropping non-finite entries along with their
// time points.
TimeSeriesFeature make_series(std::string name, std::vector<double> values,
                              std::vector<double> time);

// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }
};

// Input data violates a documented format or invariant.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The solver hit its iteration cap before meeting the KKT tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), best_residual(residual) {}
  double best_residual;
};

// Sink for recoverable warnings. The default writes to standard error.
using WarningSink = std::function<void(const std::string&)>;
void default_warning(const std::string& message);

// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index is
// processed exactly once; the first exception thrown is rethrown.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& body);

unsigned default_jobs();

}  // namespace hwpd
