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

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hwpd/common.hpp"

namespace hwpd::svm {

// Box constraint C and the kernel width gamma of
//   K(u, v) = exp(-||u - v||^2 / (2 gamma^2)).
// The common "multiplier" convention exp(-g ||u - v||^2) corresponds to
// g = 1 / (2 gamma^2).
struct RbfParams {
  double c = 1.0;
  double gamma_width = 1.0;

  friend bool operator==(const RbfParams&, const RbfParams&) = default;
};

double rbf_kernel(std::span<const double> u, std::span<const double> v,
                  double gamma_width);

inline double rbf_from_squared_distance(double d2, double gamma_width);

// Pairwise squared Euclidean distances between the rows of a and b.
Matrix squared_distances(const Matrix& a, const Matrix& b);

struct SmoOptions {
  double tolerance = 1e-3;  // maximal violating pair gap and KKT residual
  std::size_t max_iterations = 1000000;
};

struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;  // f(x) = sum alpha_i y_i K(x_i, x) + bias
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
};

// SMO on a precomputed kernel matrix with second-order working-pair
// selection. y holds +1/-1. Throws ConvergenceError at the iteration cap.
DualSolution solve_dual(const Matrix& kernel, std::span<const int> y, double c,
                        const SmoOptions& options = {});

// Largest KKT violation over the training points, measured on y_i f(x_i).
double kkt_residual(const Matrix& kernel, std::span<const int> y,
                    std::span<const double> alpha, double bias, double c);

struct TrainedModel {
  Matrix support_vectors;
  std::vector<double> dual_coef;  // alpha_i y_i for each support vector
  double bias = 0.0;
  RbfParams params;
  // Applied to raw inputs before the kernel when non-empty.
  std::vector<double> feature_mean;
  std::vector<double> feature_scale;
  std::vector<double> alpha;  // for every training row
  double kkt_residual = 0.0;

  double decision(std::span<const double> x) const;
};

TrainedModel train_smo(const Matrix& x, std::span<const int> y,
                       const RbfParams& params, const SmoOptions& options = {});

// Area under the ROC curve from +1/-1 labels; ties count one half.
// std::nullopt unless both classes are present.
std::optional<double> auc(std::span<const double> scores,
                          std::span<const int> labels);

// Twice the Mann-Whitney count of positive-over-negative wins (ties add 1),
// and the number of positive x negative pairs.
struct AucCounts {
  std::uint64_t twice_wins = 0;
  std::uint64_t pairs = 0;
};
AucCounts auc_counts(std::span<const double> scores, std::span<const int> labels);

struct Grid {
  std::vector<double> c_values;
  std::vector<double> gamma_values;

  std::size_t size() const { return c_values.size() * gamma_values.size(); }
  RbfParams at(std::size_t k) const;

  // Powers of two 2^lo ... 2^hi for C and gamma.
  static Grid from_exponents(int c_lo, int c_hi, int gamma_lo, int gamma_hi);
  // C = 2^-10 ... 2^7, gamma = 2^-7 ... 2^7: 270 points.
  static Grid standard();
};

// Stratified k-fold assignment of 0/1 labels. When a class is too small for
// two members per fold the fold count is reduced and a warning issued; fewer
// than two feasible folds throws DataError.
std::vector<int> stratified_folds(std::span<const int> labels,
                                  std::size_t folds, std::uint64_t seed,
                                  std::size_t* effective_folds = nullptr,
                                  const WarningSink& warn = default_warning);

inline double rbf_from_squared_distance(double d2, double gamma_width) {
  return std::exp(-d2 / (2.0 * gamma_width * gamma_width));
}

}  // namespace hwpd::svm
