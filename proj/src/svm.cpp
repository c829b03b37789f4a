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

#include "hwpd/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace hwpd::svm {

double rbf_kernel(std::span<const double> u, std::span<const double> v,
                  double gamma_width) {
  if (u.size() != v.size())
    throw std::invalid_argument("rbf_kernel: dimension mismatch");
  if (!(gamma_width > 0.0))
    throw std::invalid_argument("rbf_kernel: width must be positive");
  double d2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    d2 += d * d;
  }
  return rbf_from_squared_distance(d2, gamma_width);
}

Matrix squared_distances(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols)
    throw std::invalid_argument("squared_distances: dimension mismatch");
  Matrix out(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* bj = b.row(j);
      double d2 = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) {
        const double d = ai[k] - bj[k];
        d2 += d * d;
      }
      out(i, j) = d2;
    }
  }
  return out;
}

namespace {

constexpr double kTau = 1e-12;

bool is_upper(double a, double c) { return a >= c; }
bool is_lower(double a) { return a <= 0.0; }

// Bias from the free multipliers, or the midpoint of the feasible interval
// when every multiplier sits at a bound.
double compute_bias(std::span<const int> y, std::span<const double> alpha,
                    std::span<const double> grad, double c) {
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double yg = y[i] * grad[i];
    if (is_upper(alpha[i], c)) {
      if (y[i] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (is_lower(alpha[i])) {
      if (y[i] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free)
                                : 0.5 * (ub + lb);
  return -rho;
}

}  // namespace

double kkt_residual(const Matrix& kernel, std::span<const int> y,
                    std::span<const double> alpha, double bias, double c) {
  double worst = 0.0;
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) {
    double f = bias;
    for (std::size_t j = 0; j < n; ++j)
      if (alpha[j] != 0.0) f += alpha[j] * y[j] * kernel(i, j);
    const double margin = y[i] * f;
    double r;
    if (is_lower(alpha[i])) r = std::max(0.0, 1.0 - margin);
    else if (is_upper(alpha[i], c)) r = std::max(0.0, margin - 1.0);
    else r = std::fabs(margin - 1.0);
    worst = std::max(worst, r);
  }
  return worst;
}

DualSolution solve_dual(const Matrix& kernel, std::span<const int> y, double c,
                        const SmoOptions& options) {
  const std::size_t n = y.size();
  if (kernel.rows != n || kernel.cols != n)
    throw std::invalid_argument("solve_dual: kernel shape mismatch");
  if (!(c > 0.0)) throw std::invalid_argument("solve_dual: C must be positive");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1) pos = true;
    else if (v == -1) neg = true;
    else throw std::invalid_argument("solve_dual: labels must be +1/-1");
  }
  if (!pos || !neg) throw std::invalid_argument("solve_dual: need both classes");

  DualSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);  // Q alpha - e
  auto q = [&](std::size_t i, std::size_t j) {
    return static_cast<double>(y[i] * y[j]) * kernel(i, j);
  };

  double eps = options.tolerance;
  std::size_t iter = 0;
  for (;;) {
    // Working pair: i maximizes -y G over I_up; j minimizes the second-order
    // objective decrease over I_low.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t wi = n;
    for (std::size_t t = 0; t < n; ++t) {
      const bool up = y[t] == 1 ? !is_upper(sol.alpha[t], c)
                                : !is_lower(sol.alpha[t]);
      if (up && -y[t] * grad[t] >= gmax) {
        gmax = -y[t] * grad[t];
        wi = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::size_t wj = n;
    if (wi < n) {
      for (std::size_t t = 0; t < n; ++t) {
        const bool low = y[t] == 1 ? !is_lower(sol.alpha[t])
                                   : !is_upper(sol.alpha[t], c);
        if (!low) continue;
        const double yg = y[t] * grad[t];
        gmax2 = std::max(gmax2, yg);
        const double b = gmax + yg;
        if (b > 0.0) {
          double a = kernel(wi, wi) + kernel(t, t) - 2.0 * kernel(wi, t);
          if (a <= 0.0) a = kTau;
          const double obj = -(b * b) / a;
          if (obj <= best) {
            best = obj;
            wj = t;
          }
        }
      }
    }

    if (wi == n || wj == n || gmax + gmax2 < eps) {
      sol.bias = compute_bias(y, sol.alpha, grad, c);
      sol.kkt_residual = kkt_residual(kernel, y, sol.alpha, sol.bias, c);
      if (sol.kkt_residual <= options.tolerance || eps < 1e-12) break;
      eps *= 0.5;  // bias averaging can exceed the pair gap; tighten
      if (wi == n || wj == n) break;
      continue;
    }
    if (iter >= options.max_iterations) {
      sol.bias = compute_bias(y, sol.alpha, grad, c);
      double r = kkt_residual(kernel, y, sol.alpha, sol.bias, c);
      throw ConvergenceError("SMO reached " + std::to_string(iter) +
                                 " iterations without convergence",
                             r);
    }
    ++iter;

    const std::size_t i = wi, j = wj;
    const double old_i = sol.alpha[i], old_j = sol.alpha[j];
    double& ai = sol.alpha[i];
    double& aj = sol.alpha[j];
    if (y[i] != y[j]) {
      double quad = kernel(i, i) + kernel(j, j) - 2.0 * kernel(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) { aj = 0.0; ai = diff; }
      } else {
        if (ai < 0.0) { ai = 0.0; aj = -diff; }
      }
      if (diff > 0.0) {
        if (ai > c) { ai = c; aj = c - diff; }
      } else {
        if (aj > c) { aj = c; ai = c + diff; }
      }
    } else {
      double quad = kernel(i, i) + kernel(j, j) - 2.0 * kernel(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) { ai = c; aj = sum - c; }
      } else {
        if (aj < 0.0) { aj = 0.0; ai = sum; }
      }
      if (sum > c) {
        if (aj > c) { aj = c; ai = sum - c; }
      } else {
        if (ai < 0.0) { ai = 0.0; aj = sum; }
      }
    }
    const double di = ai - old_i, dj = aj - old_j;
    for (std::size_t k = 0; k < n; ++k)
      grad[k] += q(i, k) * di + q(j, k) * dj;
  }
  sol.iterations = iter;
  return sol;
}

double TrainedModel::decision(std::span<const double> x) const {
  if (x.size() != support_vectors.cols)
    throw std::invalid_argument("decision: dimension mismatch");
  std::vector<double> z(x.begin(), x.end());
  if (!feature_mean.empty())
    for (std::size_t k = 0; k < z.size(); ++k)
      z[k] = (z[k] - feature_mean[k]) / feature_scale[k];
  double f = bias;
  for (std::size_t s = 0; s < support_vectors.rows; ++s)
    f += dual_coef[s] *
         rbf_kernel({support_vectors.row(s), support_vectors.cols}, z,
                    params.gamma_width);
  return f;
}

TrainedModel train_smo(const Matrix& x, std::span<const int> y,
                       const RbfParams& params, const SmoOptions& options) {
  if (x.rows != y.size())
    throw std::invalid_argument("train_smo: row/label count mismatch");
  if (!(params.c > 0.0) || !(params.gamma_width > 0.0))
    throw std::invalid_argument("train_smo: C and gamma must be positive");
  Matrix k = squared_distances(x, x);
  for (double& v : k.data) v = rbf_from_squared_distance(v, params.gamma_width);
  DualSolution sol = solve_dual(k, y, params.c, options);

  TrainedModel model;
  model.params = params;
  model.bias = sol.bias;
  model.alpha = sol.alpha;
  model.kkt_residual = sol.kkt_residual;
  std::size_t nsv = 0;
  for (double a : sol.alpha) nsv += a > 0.0 ? 1 : 0;
  model.support_vectors = Matrix(nsv, x.cols);
  std::size_t s = 0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    if (!(sol.alpha[i] > 0.0)) continue;
    std::copy(x.row(i), x.row(i) + x.cols, model.support_vectors.row(s));
    model.dual_coef.push_back(sol.alpha[i] * y[i]);
    ++s;
  }
  return model;
}

AucCounts auc_counts(std::span<const double> scores,
                     std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("auc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  // Walk tie groups in ascending order: a positive beats every negative
  // strictly below it and ties with the negatives in its group.
  AucCounts out;
  std::uint64_t neg_below = 0, n_pos = 0, n_neg = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    std::uint64_t pos_g = 0, neg_g = 0;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? pos_g : neg_g) += 1;
      ++j;
    }
    out.twice_wins += pos_g * (2 * neg_below + neg_g);
    neg_below += neg_g;
    n_pos += pos_g;
    n_neg += neg_g;
    i = j;
  }
  out.pairs = n_pos * n_neg;
  return out;
}

std::optional<double> auc(std::span<const double> scores,
                          std::span<const int> labels) {
  AucCounts c = auc_counts(scores, labels);
  if (c.pairs == 0) return std::nullopt;
  return 0.5 * static_cast<double>(c.twice_wins) / static_cast<double>(c.pairs);
}

RbfParams Grid::at(std::size_t k) const {
  return {c_values[k / gamma_values.size()],
          gamma_values[k % gamma_values.size()]};
}

Grid Grid::from_exponents(int c_lo, int c_hi, int gamma_lo, int gamma_hi) {
  if (c_lo > c_hi || gamma_lo > gamma_hi)
    throw std::invalid_argument("grid exponent range is empty");
  Grid g;
  for (int e = c_lo; e <= c_hi; ++e) g.c_values.push_back(std::ldexp(1.0, e));
  for (int e = gamma_lo; e <= gamma_hi; ++e)
    g.gamma_values.push_back(std::ldexp(1.0, e));
  return g;
}

Grid Grid::standard() { return from_exponents(-10, 7, -7, 7); }

std::vector<int> stratified_folds(std::span<const int> labels,
                                  std::size_t folds, std::uint64_t seed,
                                  std::size_t* effective_folds,
                                  const WarningSink& warn) {
  std::vector<std::size_t> cls[2];
  for (std::size_t i = 0; i < labels.size(); ++i)
    cls[labels[i] == 1 ? 1 : 0].push_back(i);
  const std::size_t smallest = std::min(cls[0].size(), cls[1].size());
  std::size_t k = std::min(folds, smallest / 2);
  if (k < 2)
    throw DataError("cross-validation needs at least 4 subjects per class");
  if (k < folds)
    warn("reducing cross-validation from " + std::to_string(folds) + " to " +
         std::to_string(k) + " folds: smallest class has " +
         std::to_string(smallest) + " subjects");
  if (effective_folds) *effective_folds = k;

  std::mt19937_64 rng(seed);
  std::vector<int> fold(labels.size(), 0);
  std::size_t offset = 0;
  for (auto& members : cls) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t p = 0; p < members.size(); ++p)
      fold[members[p]] = static_cast<int>((offset + p) % k);
    offset += members.size();
  }
  return fold;
}

}  // namespace hwpd::svm
