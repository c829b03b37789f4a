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

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "hwpd/evaluation.hpp"
#include "hwpd/svm.hpp"
#include "oracles.hpp"

using namespace hwpd;
using namespace hwpd::svm;
using hwpd::featurize::FeatureMatrix;
using hwpd::ingest::Modality;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = rows[r][c];
  return m;
}

Matrix kernel_matrix(const Matrix& x, double gamma) {
  Matrix k(x.rows, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.rows; ++j) {
      double d2 = 0;
      for (std::size_t c = 0; c < x.cols; ++c) d2 += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
      k(i, j) = std::exp(-d2 / (2 * gamma * gamma));
    }
  return k;
}

// KKT conditions and dual feasibility checked from scratch.
void check_kkt(const Matrix& x, const std::vector<int>& y, const TrainedModel& model) {
  const double c = model.params.c;
  double sum = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double a = model.alpha[i];
    CHECK(a >= 0.0);
    CHECK(a <= c);
    sum += a * y[i];
    const double margin = y[i] * model.decision({x.row(i), x.cols});
    if (a == 0.0) CHECK(margin >= 1.0 - 1e-3);
    else if (a == c) CHECK(margin <= 1.0 + 1e-3);
    else CHECK(std::fabs(margin - 1.0) <= 1e-3);
  }
  CHECK(std::fabs(sum) <= 1e-6);
  CHECK(model.kkt_residual <= 1e-3);
}

FeatureMatrix blob_matrix(std::size_t per_class, std::size_t dims, double sep,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  FeatureMatrix m;
  m.values = Matrix(2 * per_class, dims);
  for (std::size_t r = 0; r < 2 * per_class; ++r) {
    const int label = r < per_class ? 1 : 0;
    m.labels.push_back(label);
    m.subject_ids.push_back("S" + std::to_string(r));
    for (std::size_t c = 0; c < dims; ++c) m.values(r, c) = g(rng) + (label ? sep : 0.0);
  }
  for (std::size_t c = 0; c < dims; ++c) m.feature_names.push_back("f" + std::to_string(c));
  return m;
}

}  // namespace

TEST_CASE("rbf kernel examples and properties") {
  std::vector<double> u = {1.0, -2.0, 0.5};
  CHECK(rbf_kernel(u, u, 0.7) == 1.0);
  const double gamma = 1.5;
  std::vector<double> v = {1.0 + std::sqrt(2.0) * gamma, -2.0, 0.5};
  CHECK(rbf_kernel(u, v, gamma) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(std::exp(-1.0) == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK_THROWS(rbf_kernel(u, std::vector<double>{1.0}, 1.0));

  std::mt19937_64 rng(61);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> a(5), b(5);
    for (double& x : a) x = g(rng);
    for (double& x : b) x = g(rng);
    double k = rbf_kernel(a, b, 1.0);
    CHECK(k == rbf_kernel(b, a, 1.0));
    CHECK(k > 0.0);
    CHECK(k <= 1.0);
  }
  double prev = 2.0;
  for (double d = 0.0; d < 5.0; d += 0.25) {
    double k = rbf_kernel(std::vector<double>{0.0}, std::vector<double>{d}, 2.0);
    CHECK(k < prev);
    prev = k;
  }
}

TEST_CASE("train_smo: two points give a symmetric boundary") {
  Matrix x = from_rows({{0.0}, {1.0}});
  std::vector<int> y = {-1, 1};
  for (double c : {1.0, 10.0, 100.0}) {
    auto model = train_smo(x, y, {c, 1.0});
    CHECK(std::fabs(model.decision(std::vector<double>{0.5})) <= 1e-6);
    check_kkt(x, y, model);
  }
}

TEST_CASE("train_smo: XOR-4 with gamma 0.5, C 100") {
  Matrix x = from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  std::vector<int> y = {1, 1, -1, -1};
  auto model = train_smo(x, y, {100.0, 0.5});
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(y[i] * model.decision({x.row(i), 2}) > 0.0);
  check_kkt(x, y, model);
}

TEST_CASE("train_smo: separable blobs reach training AUC 1") {
  std::mt19937_64 rng(62);
  std::normal_distribution<double> g(0.0, 0.3);
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < 20; ++i) {
    int label = i < 10 ? 1 : -1;
    rows.push_back({label * 2.0 + g(rng), label * 1.0 + g(rng)});
    y.push_back(label);
  }
  Matrix x = from_rows(rows);
  auto model = train_smo(x, y, {1.0, 1.0});
  std::vector<double> scores;
  for (std::size_t i = 0; i < x.rows; ++i) scores.push_back(model.decision({x.row(i), 2}));
  CHECK(*auc(scores, y) == 1.0);
  check_kkt(x, y, model);
}

TEST_CASE("solve_dual: KKT and feasibility across random problems") {
  std::mt19937_64 rng(63);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 10 + rep;
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (std::size_t i = 0; i < n; ++i) {
      int label = i % 2 ? 1 : -1;
      rows.push_back({g(rng) + 0.5 * label, g(rng), g(rng)});
      y.push_back(label);
    }
    Matrix x = from_rows(rows);
    const double c = std::ldexp(1.0, rep % 18 - 10);
    const double gamma = std::ldexp(1.0, rep % 15 - 7);
    auto model = train_smo(x, y, {c, gamma});
    CAPTURE(c);
    CAPTURE(gamma);
    check_kkt(x, y, model);
    // The library residual agrees with the from-scratch kernel.
    Matrix k = kernel_matrix(x, gamma);
    CHECK(kkt_residual(k, y, model.alpha, model.bias, c) <= 1e-3);
  }
}

TEST_CASE("solve_dual: iteration cap raises a convergence error") {
  std::mt19937_64 rng(64);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  for (int i = 0; i < 40; ++i) {
    rows.push_back({g(rng), g(rng)});
    y.push_back(i % 2 ? 1 : -1);
  }
  SmoOptions opts;
  opts.max_iterations = 2;
  try {
    train_smo(from_rows(rows), y, {100.0, 0.5}, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_residual > 0.0);
  }
}

TEST_CASE("auc examples") {
  CHECK(*auc(std::vector<double>{0.9, 0.8, 0.1, 0.2}, std::vector<int>{1, 1, -1, -1}) == 1.0);
  CHECK(*auc(std::vector<double>(6, 0.3), std::vector<int>{1, 1, 1, -1, -1, -1}) == 0.5);
  CHECK_FALSE(auc(std::vector<double>{1, 2}, std::vector<int>{1, 1}).has_value());
}

TEST_CASE("auc matches the pairwise oracle and flips exactly") {
  std::mt19937_64 rng(65);
  std::uniform_int_distribution<int> coarse(0, 6), size(2, 60);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 500; ++rep) {
    const int n = size(rng);
    std::vector<double> s(n);
    std::vector<int> y(n), flipped(n);
    for (int i = 0; i < n; ++i) {
      s[i] = rep % 2 ? coarse(rng) : g(rng);
      y[i] = i < 1 ? 1 : (i < 2 ? -1 : (coarse(rng) % 2 ? 1 : -1));
      flipped[i] = -y[i];
    }
    auto counts = auc_counts(s, y);
    auto [twice, pairs] = oracle::auc_pairs(s, y);
    CHECK(counts.twice_wins == twice);
    CHECK(counts.pairs == pairs);
    CHECK(*auc(s, y) == 0.5 * static_cast<double>(twice) / static_cast<double>(pairs));
    auto fc = auc_counts(s, flipped);
    CHECK(fc.twice_wins == 2 * counts.pairs - counts.twice_wins);
    CHECK(std::fabs(*auc(s, flipped) - (1.0 - *auc(s, y))) <= 1e-15);
  }
}

TEST_CASE("grid: 270 points, C-major order, powers of two") {
  Grid g = Grid::standard();
  CHECK(g.size() == 270);
  CHECK(g.c_values.size() == 18);
  CHECK(g.gamma_values.size() == 15);
  CHECK(g.at(0).c == std::ldexp(1.0, -10));
  CHECK(g.at(0).gamma_width == std::ldexp(1.0, -7));
  CHECK(g.at(269).c == 128.0);
  CHECK(g.at(269).gamma_width == 128.0);
  CHECK(g.at(15).c == std::ldexp(1.0, -9));
  std::set<std::pair<double, double>> unique;
  for (std::size_t k = 0; k < g.size(); ++k) unique.insert({g.at(k).c, g.at(k).gamma_width});
  CHECK(unique.size() == 270);
  CHECK_THROWS(Grid::from_exponents(2, 1, 0, 0));
}

TEST_CASE("stratified folds: partition, balance, determinism, reduction") {
  std::vector<int> labels;
  for (int i = 0; i < 43; ++i) labels.push_back(i % 3 == 0 ? 1 : 0);
  const double pd = std::count(labels.begin(), labels.end(), 1);
  std::size_t k = 0;
  auto f = stratified_folds(labels, 5, 7, &k, [](const std::string&) {});
  CHECK(k == 5);
  for (int fold = 0; fold < 5; ++fold) {
    double in = 0, in_pd = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (f[i] == fold) {
        ++in;
        in_pd += labels[i];
      }
    CHECK(in > 0);
    CHECK(std::fabs(in_pd - in * pd / labels.size()) <= 1.0 + 1e-9);
  }
  CHECK(f == stratified_folds(labels, 5, 7, nullptr, [](const std::string&) {}));
  CHECK_FALSE(f == stratified_folds(labels, 5, 8, nullptr, [](const std::string&) {}));

  std::vector<int> small = {1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0};
  int warned = 0;
  stratified_folds(small, 10, 1, &k, [&](const std::string&) { ++warned; });
  CHECK(k == 3);
  CHECK(warned == 1);
  std::vector<int> tiny = {1, 1, 1, 0, 0, 0};
  CHECK_THROWS_AS(stratified_folds(tiny, 10, 1), DataError);
}

TEST_CASE("grid_search_cv: separable cohort reaches mean AUC 1") {
  FeatureMatrix m = blob_matrix(20, 6, 4.0, 66);
  CvOptions opts;
  auto rep = grid_search_cv(m, Grid::standard(), opts);
  CHECK(rep.grid_points == 270);
  CHECK(rep.grid_mean_auc.size() == 270);
  CHECK(rep.folds == 10);
  CHECK(rep.mean_auc == 1.0);
  CHECK(rep.max_kkt_residual <= 1e-3);
  for (double a : rep.fold_auc) {
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
  }
  auto again = grid_search_cv(m, Grid::standard(), opts);
  CHECK(again.grid_mean_auc == rep.grid_mean_auc);
  CHECK(again.best == rep.best);
}

TEST_CASE("grid_search_cv: label-shuffled cohort stays near chance") {
  FeatureMatrix m = blob_matrix(20, 30, 1.5, 67);
  std::mt19937_64 rng(68);
  std::shuffle(m.labels.begin(), m.labels.end(), rng);
  CvOptions opts;
  auto rep = grid_search_cv(m, Grid::standard(), opts);
  CHECK(rep.mean_auc >= 0.3);
  CHECK(rep.mean_auc <= 0.7);
}

TEST_CASE("grid_search_cv: protocols and nesting") {
  FeatureMatrix m = blob_matrix(12, 5, 1.0, 69);
  Grid g = Grid::from_exponents(-2, 2, -1, 1);
  CvOptions opts;
  opts.protocol = Protocol::kPaper;
  auto paper = grid_search_cv(m, g, opts);
  CHECK(paper.protocol == Protocol::kPaper);
  CHECK(paper.folds == 6);
  opts.protocol = Protocol::kInFold;
  opts.nested = true;
  auto nested = grid_search_cv(m, g, opts);
  CHECK(nested.nested);
  CHECK(nested.fold_params.size() == nested.folds);
  CHECK(nested.grid_mean_auc.empty());
  CHECK(nested.mean_auc >= 0.0);
  CHECK(nested.mean_auc <= 1.0);
}

TEST_CASE("evaluate_all: 24 cells, empty cells, JSON and table") {
  CohortMatrices matrices;
  for (Modality mod : ingest::kAllModalities)
    for (int task = 1; task <= 7; ++task) {
      FeatureMatrix m = blob_matrix(10, 4, 3.0, 100 + task);
      if (mod == Modality::kInAir && task == 6) {
        // Same values in both classes: nothing survives the U-test.
        for (std::size_t r = 0; r < 10; ++r)
          for (std::size_t c = 0; c < m.cols(); ++c) m.values(r + 10, c) = m.values(r, c);
      }
      m.task_id = task;
      m.modality = mod;
      matrices[{task, mod}] = m;
    }
  EvaluateOptions opts;
  opts.grid = Grid::from_exponents(-1, 1, -1, 1);
  opts.cv.folds = 5;
  opts.runs = {{Protocol::kInFold, false}, {Protocol::kPaper, false}};
  opts.config_hash = "abc";
  auto report = evaluate_all(matrices, opts);
  REQUIRE(report.runs.size() == 2);
  for (const auto& run : report.runs) {
    CHECK(run.cells.size() == 24);
    const CellResult* empty = run.find(6, Modality::kInAir);
    REQUIRE(empty != nullptr);
    CHECK_FALSE(empty->available);
    CHECK_FALSE(empty->cv.has_value());
    CHECK(empty->features_kept == 0);
    const CellResult* all = run.find(0, Modality::kInAir);
    REQUIRE(all != nullptr);
    CHECK(all->available);
    CHECK(all->features_raw == 28);
    for (const auto& cell : run.cells)
      if (cell.available) CHECK(cell.cv->mean_auc > 0.0);
  }
  std::string json = report_to_json(report);
  auto back = report_from_json(json);
  CHECK(report_to_json(back) == json);
  CHECK(json.find("\"config_hash\": \"abc\"") != std::string::npos);
  std::string table = render_table(report);
  CHECK(table.find("AUC [%] (in-fold)") != std::string::npos);
  CHECK(table.find("AUC [%] (paper)") != std::string::npos);
  // Task 6 row has a dash in the in-air column and no zero AUC anywhere.
  auto row6 = table.find("\n6 ");
  REQUIRE(row6 != std::string::npos);
  std::string line = table.substr(row6 + 1, table.find('\n', row6 + 1) - row6 - 1);
  CHECK(line.find(" - ") != std::string::npos);
  CHECK(table.find(" 0.00") == std::string::npos);
  CHECK(render_table(report) == table);
  CHECK_THROWS_AS(report_from_json("{not json"), DataError);
}
