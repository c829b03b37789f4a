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

#include "hwpd/mann_whitney.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "hwpd/pressure.hpp"

namespace hwpd::featurize {

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j + 1);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

namespace {

// Doubled midranks are integers, so the exact null distribution of 2 * R_A
// is a subset-sum count over integers.
double exact_p_value(const std::vector<double>& ranks, std::size_t n_a,
                     double u_a) {
  const std::size_t n = ranks.size();
  const std::size_t n_b = n - n_a;
  std::vector<long long> twice(n);
  long long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    twice[i] = std::llround(2.0 * ranks[i]);
    total += twice[i];
  }
  // count[k][s]: subsets of size k with doubled rank sum s.
  std::vector<std::vector<std::uint64_t>> count(
      n_a + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(total) + 1, 0));
  count[0][0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = static_cast<std::size_t>(twice[i]);
    for (std::size_t k = std::min(i + 1, n_a); k >= 1; --k)
      for (std::size_t s = static_cast<std::size_t>(total); s >= w; --s)
        count[k][s] += count[k - 1][s - w];
  }
  // 2 U_A = 2 R_A - n_a (n_a + 1); compare |2 U_A - n_a n_b| as integers.
  const auto base = static_cast<long long>(n_a * (n_a + 1));
  const auto mid = static_cast<long long>(n_a * n_b);
  const long long observed = std::llabs(std::llround(2.0 * u_a) - mid);
  std::uint64_t extreme = 0, all = 0;
  for (std::size_t s = 0; s <= static_cast<std::size_t>(total); ++s) {
    const std::uint64_t c = count[n_a][s];
    if (c == 0) continue;
    all += c;
    if (std::llabs(static_cast<long long>(s) - base - mid) >= observed)
      extreme += c;
  }
  return static_cast<double>(extreme) / static_cast<double>(all);
}

double normal_p_value(const std::vector<double>& pooled_values, std::size_t n_a,
                      double u_a) {
  const auto n1 = static_cast<double>(n_a);
  const auto n2 = static_cast<double>(pooled_values.size() - n_a);
  const double n = n1 + n2;
  std::vector<double> sorted = pooled_values;
  std::sort(sorted.begin(), sorted.end());
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    i = j;
  }
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
  if (!(var > 0.0)) return 1.0;
  const double diff = std::max(0.0, std::fabs(u_a - 0.5 * n1 * n2) - 0.5);
  const double z = diff / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a,
                                 std::span<const double> b,
                                 PValueMethod method) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("Mann-Whitney U needs two values per group");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<double> ranks = midranks(pooled);
  double r_a = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r_a += ranks[i];
  const auto n1 = static_cast<double>(a.size());
  const auto n2 = static_cast<double>(b.size());
  MannWhitneyResult res;
  res.u_a = r_a - n1 * (n1 + 1.0) / 2.0;
  res.u = std::min(res.u_a, n1 * n2 - res.u_a);

  const bool exact = method == PValueMethod::kExact ||
                     (method == PValueMethod::kAuto &&
                      pooled.size() <= kExactLimit);
  if (exact && pooled.size() > 40)
    throw std::invalid_argument("exact Mann-Whitney limited to 40 values");
  res.exact = exact;
  res.p_two_sided = exact ? exact_p_value(ranks, a.size(), res.u_a)
                          : normal_p_value(pooled, a.size(), res.u_a);
  return res;
}

std::size_t FilterReport::kept_count() const {
  return static_cast<std::size_t>(std::count(kept.begin(), kept.end(), true));
}

FilterReport test_columns(const FeatureMatrix& m,
                          std::span<const std::size_t> rows, double alpha) {
  FilterReport rep;
  rep.alpha = alpha;
  rep.names = m.feature_names;
  rep.u.assign(m.cols(), 0.0);
  rep.p.assign(m.cols(), 1.0);
  rep.kept.assign(m.cols(), false);
  std::vector<double> pd, hc;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    pd.clear();
    hc.clear();
    for (std::size_t r : rows) {
      if (m.missing(r, c)) continue;
      (m.labels[r] == 1 ? pd : hc).push_back(m.values(r, c));
    }
    if (pd.size() < 2 || hc.size() < 2) continue;
    MannWhitneyResult res = mann_whitney_u(pd, hc);
    rep.u[c] = res.u;
    rep.p[c] = res.p_two_sided;
    rep.kept[c] = res.p_two_sided <= alpha;
  }
  return rep;
}

std::pair<FeatureMatrix, FilterReport> filter_features(const FeatureMatrix& m,
                                                       double alpha) {
  bool has_pd = std::count(m.labels.begin(), m.labels.end(), 1) > 0;
  bool has_hc = std::count(m.labels.begin(), m.labels.end(), 0) > 0;
  if (!has_pd || !has_hc)
    throw DataError("feature filtering needs both classes");
  std::vector<std::size_t> rows(m.rows());
  std::iota(rows.begin(), rows.end(), 0);
  FilterReport rep = test_columns(m, rows, alpha);
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (rep.kept[c]) keep.push_back(c);
  return {select_columns(m, keep), std::move(rep)};
}

void write_filter_report_csv(const FilterReport& report, std::ostream& out,
                             std::string_view metadata) {
  if (!metadata.empty()) out << "# " << metadata << '\n';
  auto num = [](double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
  };
  out << "feature,u,p,kept\n";
  for (std::size_t c = 0; c < report.names.size(); ++c)
    out << report.names[c] << ',' << num(report.u[c]) << ',' << num(report.p[c])
        << ',' << (report.kept[c] ? 1 : 0) << '\n';
}

Preprocessor Preprocessor::fit(const FeatureMatrix& m,
                               std::span<const std::size_t> train_rows,
                               const Options& options) {
  Preprocessor pp;
  const auto n = static_cast<double>(train_rows.size());
  std::vector<std::size_t> candidates;
  std::vector<double> fills;
  std::vector<double> present;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    present.clear();
    for (std::size_t r : train_rows)
      if (!m.missing(r, c)) present.push_back(m.values(r, c));
    if (present.empty() ||
        static_cast<double>(train_rows.size() - present.size()) >
            options.max_missing_fraction * n)
      continue;
    candidates.push_back(c);
    fills.push_back(pressure::median(present));
  }

  std::vector<bool> selected(candidates.size(), true);
  if (options.filter) {
    FeatureMatrix sub = select_columns(m, candidates);
    FilterReport rep = test_columns(sub, train_rows, options.alpha);
    selected = rep.kept;
  }

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!selected[k]) continue;
    const std::size_t c = candidates[k];
    double sum = 0.0;
    for (std::size_t r : train_rows)
      sum += m.missing(r, c) ? fills[k] : m.values(r, c);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t r : train_rows) {
      const double v = m.missing(r, c) ? fills[k] : m.values(r, c);
      ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / n);
    if (!(sd > 1e-12 * std::max(1.0, std::fabs(mean)))) continue;  // constant
    pp.columns_.push_back(c);
    pp.fill_.push_back(fills[k]);
    pp.mean_.push_back(mean);
    pp.scale_.push_back(sd);
  }
  return pp;
}

Matrix Preprocessor::transform(const FeatureMatrix& m,
                               std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), columns_.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < columns_.size(); ++k) {
      const std::size_t c = columns_[k];
      const double v = m.missing(rows[i], c) ? fill_[k] : m.values(rows[i], c);
      out(i, k) = (v - mean_[k]) / scale_[k];
    }
  return out;
}

}  // namespace hwpd::featurize
