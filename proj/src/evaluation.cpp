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

#include "hwpd/evaluation.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "hwpd/mann_whitney.hpp"

namespace hwpd::svm {

using featurize::FeatureMatrix;
using featurize::Preprocessor;
using ingest::Modality;

std::string protocol_name(Protocol p) {
  return p == Protocol::kPaper ? "paper" : "in-fold";
}

namespace {

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Train/test matrices for a split given as absolute row indices.
using FeatureSource = std::function<std::pair<Matrix, Matrix>(
    std::span<const std::size_t>, std::span<const std::size_t>)>;

std::vector<Split> make_splits(const std::vector<int>& labels,
                               std::span<const std::size_t> rows,
                               std::size_t folds, std::uint64_t seed,
                               std::size_t* effective, const WarningSink& warn) {
  std::vector<int> sub(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) sub[i] = labels[rows[i]];
  std::size_t k = 0;
  std::vector<int> assignment = stratified_folds(sub, folds, seed, &k, warn);
  std::vector<Split> splits(k);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t f = 0; f < k; ++f)
      (static_cast<std::size_t>(assignment[i]) == f ? splits[f].test
                                                   : splits[f].train)
          .push_back(rows[i]);
  if (effective) *effective = k;
  return splits;
}

std::vector<int> signed_labels(const std::vector<int>& labels,
                               std::span<const std::size_t> rows) {
  std::vector<int> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    y[i] = labels[rows[i]] == 1 ? 1 : -1;
  return y;
}

Matrix apply_kernel(const Matrix& d2, double gamma) {
  Matrix k(d2.rows, d2.cols);
  for (std::size_t i = 0; i < d2.data.size(); ++i)
    k.data[i] = rbf_from_squared_distance(d2.data[i], gamma);
  return k;
}

std::vector<double> held_out_scores(const Matrix& k_test, const DualSolution& sol,
                                    std::span<const int> y_train) {
  std::vector<double> scores(k_test.rows, sol.bias);
  for (std::size_t i = 0; i < k_test.rows; ++i)
    for (std::size_t j = 0; j < k_test.cols; ++j)
      if (sol.alpha[j] != 0.0) scores[i] += sol.alpha[j] * y_train[j] * k_test(i, j);
  return scores;
}

struct GridTable {
  // auc[g][f]: held-out AUC of grid point g on fold f.
  std::vector<std::vector<double>> auc;
  double max_kkt = 0.0;
};

// Scores one split for every grid point.
std::vector<double> score_split(const FeatureSource& source,
                                const std::vector<int>& labels,
                                const Split& split, const Grid& grid,
                                const SmoOptions& smo, double* max_kkt) {
  std::vector<double> out(grid.size(), 0.5);
  auto [x_train, x_test] = source(split.train, split.test);
  const std::vector<int> y_train = signed_labels(labels, split.train);
  const std::vector<int> y_test = signed_labels(labels, split.test);
  if (x_train.cols == 0) return out;
  const Matrix d_train = squared_distances(x_train, x_train);
  const Matrix d_test = squared_distances(x_test, x_train);
  for (std::size_t gi = 0; gi < grid.gamma_values.size(); ++gi) {
    const double gamma = grid.gamma_values[gi];
    const Matrix k_train = apply_kernel(d_train, gamma);
    const Matrix k_test = apply_kernel(d_test, gamma);
    for (std::size_t ci = 0; ci < grid.c_values.size(); ++ci) {
      DualSolution sol = solve_dual(k_train, y_train, grid.c_values[ci], smo);
      *max_kkt = std::max(*max_kkt, sol.kkt_residual);
      auto scores = held_out_scores(k_test, sol, y_train);
      out[ci * grid.gamma_values.size() + gi] = auc(scores, y_test).value_or(0.5);
    }
  }
  return out;
}

GridTable evaluate_grid(const FeatureSource& source,
                        const std::vector<int>& labels,
                        const std::vector<Split>& splits, const Grid& grid,
                        const SmoOptions& smo, unsigned jobs) {
  GridTable table;
  table.auc.assign(grid.size(), std::vector<double>(splits.size(), 0.5));
  std::vector<double> kkt(splits.size(), 0.0);
  std::vector<std::vector<double>> per_fold(splits.size());
  parallel_for(splits.size(), jobs, [&](std::size_t f) {
    per_fold[f] = score_split(source, labels, splits[f], grid, smo, &kkt[f]);
  });
  for (std::size_t f = 0; f < splits.size(); ++f)
    for (std::size_t g = 0; g < grid.size(); ++g) table.auc[g][f] = per_fold[f][g];
  table.max_kkt = *std::max_element(kkt.begin(), kkt.end());
  return table;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.5
                   : std::accumulate(v.begin(), v.end(), 0.0) /
                         static_cast<double>(v.size());
}

std::size_t best_index(const std::vector<double>& means) {
  std::size_t best = 0;
  for (std::size_t g = 1; g < means.size(); ++g)
    if (means[g] > means[best]) best = g;
  return best;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k), 0x6e657374u};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

CvReport grid_search_cv(const FeatureMatrix& m, const Grid& grid,
                        const CvOptions& options, const WarningSink& warn) {
  if (grid.size() == 0) throw std::invalid_argument("empty hyperparameter grid");
  CvReport rep;
  rep.seed = options.seed;
  rep.protocol = options.protocol;
  rep.nested = options.nested;
  rep.grid_points = grid.size();

  Preprocessor::Options pp_opts;
  pp_opts.filter = options.filter;
  pp_opts.alpha = options.alpha;
  pp_opts.max_missing_fraction = options.max_missing_fraction;

  std::vector<std::size_t> all(m.rows());
  std::iota(all.begin(), all.end(), 0);

  FeatureSource source;
  Matrix whole;
  if (options.protocol == Protocol::kPaper) {
    Preprocessor pp = Preprocessor::fit(m, all, pp_opts);
    whole = pp.transform(m, all);
    source = [&whole](std::span<const std::size_t> train,
                      std::span<const std::size_t> test) {
      auto slice = [&](std::span<const std::size_t> rows) {
        Matrix out(rows.size(), whole.cols);
        for (std::size_t i = 0; i < rows.size(); ++i)
          std::copy(whole.row(rows[i]), whole.row(rows[i]) + whole.cols,
                    out.row(i));
        return out;
      };
      return std::pair{slice(train), slice(test)};
    };
  } else {
    source = [&m, pp_opts](std::span<const std::size_t> train,
                           std::span<const std::size_t> test) {
      Preprocessor pp = Preprocessor::fit(m, train, pp_opts);
      return std::pair{pp.transform(m, train), pp.transform(m, test)};
    };
  }

  std::size_t k = 0;
  const std::vector<Split> outer =
      make_splits(m.labels, all, options.folds, options.seed, &k, warn);
  rep.folds = k;

  if (!options.nested) {
    GridTable table =
        evaluate_grid(source, m.labels, outer, grid, options.smo, options.jobs);
    rep.grid_mean_auc.resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g)
      rep.grid_mean_auc[g] = mean(table.auc[g]);
    const std::size_t best = best_index(rep.grid_mean_auc);
    rep.best = grid.at(best);
    rep.fold_auc = table.auc[best];
    rep.mean_auc = rep.grid_mean_auc[best];
    rep.max_kkt_residual = table.max_kkt;
    return rep;
  }

  rep.fold_auc.assign(outer.size(), 0.5);
  rep.fold_params.assign(outer.size(), {});
  std::vector<double> kkt(outer.size(), 0.0);
  parallel_for(outer.size(), options.jobs, [&](std::size_t f) {
    const Split& split = outer[f];
    auto inner = make_splits(m.labels, split.train, options.inner_folds,
                             derive_seed(options.seed, f), nullptr, warn);
    GridTable table = evaluate_grid(source, m.labels, inner, grid, options.smo, 1);
    std::vector<double> means(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) means[g] = mean(table.auc[g]);
    const RbfParams chosen = grid.at(best_index(means));
    rep.fold_params[f] = chosen;
    Grid single;
    single.c_values = {chosen.c};
    single.gamma_values = {chosen.gamma_width};
    double fold_kkt = table.max_kkt;
    rep.fold_auc[f] =
        score_split(source, m.labels, split, single, options.smo, &fold_kkt)[0];
    kkt[f] = fold_kkt;
  });
  rep.mean_auc = mean(rep.fold_auc);
  rep.max_kkt_residual = *std::max_element(kkt.begin(), kkt.end());
  // Most frequent choice, earliest grid point on ties.
  std::size_t best_count = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const RbfParams p = grid.at(g);
    auto count = static_cast<std::size_t>(
        std::count(rep.fold_params.begin(), rep.fold_params.end(), p));
    if (count > best_count) {
      best_count = count;
      rep.best = p;
    }
  }
  return rep;
}

std::string ProtocolRun::label() const {
  return protocol_name(protocol) + (nested ? "+nested" : "");
}

const CellResult* ProtocolRun::find(int task_id, Modality m) const {
  for (const auto& c : cells)
    if (c.task_id == task_id && c.modality == m) return &c;
  return nullptr;
}

CohortMatrices shuffle_labels(const CohortMatrices& matrices,
                              std::uint64_t seed) {
  std::map<std::string, int> label_of;
  for (const auto& [key, m] : matrices)
    for (std::size_t r = 0; r < m.rows(); ++r)
      label_of.emplace(m.subject_ids[r], m.labels[r]);
  std::vector<int> values;
  for (const auto& [id, lab] : label_of) values.push_back(lab);
  std::mt19937_64 rng(derive_seed(seed, 0x5348u));
  std::shuffle(values.begin(), values.end(), rng);
  std::size_t i = 0;
  for (auto& [id, lab] : label_of) lab = values[i++];
  CohortMatrices out = matrices;
  for (auto& [key, m] : out)
    for (std::size_t r = 0; r < m.rows(); ++r) m.labels[r] = label_of[m.subject_ids[r]];
  return out;
}

EvaluationReport evaluate_all(const CohortMatrices& input,
                              const EvaluateOptions& options,
                              const WarningSink& warn) {
  EvaluationReport report;
  report.tool_version = kToolVersion;
  report.seed = options.cv.seed;
  report.config_hash = options.config_hash;
  report.folds = options.cv.folds;
  report.alpha = options.cv.alpha;
  report.shuffled_labels = options.shuffle_labels;
  report.grid = options.grid;

  const CohortMatrices matrices =
      options.shuffle_labels ? shuffle_labels(input, options.cv.seed) : input;

  // Cell matrices: tasks 1..7 and their concatenation, per modality.
  struct Job {
    int task_id;
    Modality modality;
    const FeatureMatrix* matrix;
  };
  std::vector<FeatureMatrix> concatenated;
  concatenated.reserve(3);
  std::vector<Job> jobs;
  for (Modality mod : ingest::kAllModalities) {
    std::vector<FeatureMatrix> per_task;
    for (int task = 1; task <= 7; ++task) {
      auto it = matrices.find({task, mod});
      jobs.push_back({task, mod, it == matrices.end() ? nullptr : &it->second});
      if (it != matrices.end()) per_task.push_back(it->second);
    }
    concatenated.push_back(featurize::concatenate_tasks(per_task, warn));
    concatenated.back().modality = mod;
    jobs.push_back({0, mod, per_task.empty() ? nullptr : &concatenated.back()});
  }

  for (const auto& [protocol, nested] : options.runs) {
    ProtocolRun run;
    run.protocol = protocol;
    run.nested = nested;
    run.cells.resize(jobs.size());
    CvOptions cv = options.cv;
    cv.protocol = protocol;
    cv.nested = nested;
    cv.jobs = 1;
    parallel_for(jobs.size(), options.jobs, [&](std::size_t j) {
      CellResult& cell = run.cells[j];
      cell.task_id = jobs[j].task_id;
      cell.modality = jobs[j].modality;
      if (jobs[j].matrix == nullptr) return;
      const FeatureMatrix& m = *jobs[j].matrix;
      cell.subjects = m.rows();
      cell.features_raw = m.cols();
      cell.features_kept = featurize::filter_features(m, cv.alpha).second.kept_count();
      cell.available = !cv.filter || cell.features_kept > 0;
      if (!cell.available) return;
      cell.cv = grid_search_cv(m, options.grid, cv, warn);
    });
    report.runs.push_back(std::move(run));
  }
  return report;
}

}  // namespace hwpd::svm
