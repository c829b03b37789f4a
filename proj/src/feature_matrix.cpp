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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "hwpd/featurize.hpp"

namespace hwpd::featurize {

using ingest::Label;
using ingest::Modality;

bool FeatureMatrix::missing(std::size_t r, std::size_t c) const {
  return std::isnan(values(r, c));
}

FeatureMatrix assemble(std::span<const SubjectFeatures> cohort, int task_id,
                       Modality modality, const WarningSink& warn) {
  FeatureMatrix m;
  m.task_id = task_id;
  m.modality = modality;
  std::vector<const SubjectFeatures*> rows;
  std::set<std::string> seen;
  std::set<std::string> names;
  for (const auto& s : cohort) {
    if (s.task_id != task_id || s.modality != modality) continue;
    if (s.label == Label::kUnlabeled) {
      warn("subject " + s.subject_id + " has no label; excluded");
      continue;
    }
    if (!seen.insert(s.subject_id).second) {
      warn("duplicate features for subject " + s.subject_id + "; keeping first");
      continue;
    }
    rows.push_back(&s);
    for (const auto& f : s.features) names.insert(f.name);
  }
  m.feature_names.assign(names.begin(), names.end());
  std::map<std::string_view, std::size_t> col;
  for (std::size_t c = 0; c < m.feature_names.size(); ++c)
    col[m.feature_names[c]] = c;
  m.values = Matrix(rows.size(), m.feature_names.size(), std::nan(""));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    m.subject_ids.push_back(rows[r]->subject_id);
    m.labels.push_back(rows[r]->label == Label::kPD ? 1 : 0);
    for (const auto& f : rows[r]->features)
      if (f.value) m.values(r, col[f.name]) = *f.value;
  }
  return m;
}

FeatureMatrix concatenate_tasks(std::span<const FeatureMatrix> per_task,
                                const WarningSink& warn) {
  FeatureMatrix out;
  out.task_id = 0;
  if (per_task.empty()) return out;
  out.modality = per_task.front().modality;

  // Subjects present in every task, in the order of the first matrix.
  std::vector<std::map<std::string, std::size_t>> index(per_task.size());
  for (std::size_t k = 0; k < per_task.size(); ++k)
    for (std::size_t r = 0; r < per_task[k].rows(); ++r)
      index[k][per_task[k].subject_ids[r]] = r;
  const FeatureMatrix& first = per_task.front();
  for (std::size_t r = 0; r < first.rows(); ++r) {
    const std::string& id = first.subject_ids[r];
    bool everywhere = true;
    for (const auto& idx : index) everywhere = everywhere && idx.count(id);
    if (!everywhere) {
      warn("subject " + id + " lacks some tasks; excluded from all-task matrix");
      continue;
    }
    out.subject_ids.push_back(id);
    out.labels.push_back(first.labels[r]);
  }

  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> cols;
  for (std::size_t k = 0; k < per_task.size(); ++k)
    for (std::size_t c = 0; c < per_task[k].cols(); ++c)
      cols.push_back({"t" + std::to_string(per_task[k].task_id) + "." +
                          per_task[k].feature_names[c],
                      {k, c}});
  std::sort(cols.begin(), cols.end());
  out.values = Matrix(out.subject_ids.size(), cols.size(), std::nan(""));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out.feature_names.push_back(cols[c].first);
    auto [k, src] = cols[c].second;
    for (std::size_t r = 0; r < out.subject_ids.size(); ++r)
      out.values(r, c) = per_task[k].values(index[k][out.subject_ids[r]], src);
  }
  return out;
}

FeatureMatrix select_columns(const FeatureMatrix& m,
                             std::span<const std::size_t> columns) {
  FeatureMatrix out;
  out.task_id = m.task_id;
  out.modality = m.modality;
  out.subject_ids = m.subject_ids;
  out.labels = m.labels;
  out.values = Matrix(m.rows(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out.feature_names.push_back(m.feature_names[columns[c]]);
    for (std::size_t r = 0; r < m.rows(); ++r)
      out.values(r, c) = m.values(r, columns[c]);
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string matrix_filename(int task_id, Modality modality) {
  return "features_t" + (task_id == 0 ? std::string("all")
                                      : std::to_string(task_id)) +
         "_" + std::string(ingest::modality_name(modality)) + ".csv";
}

void write_matrix_csv(const FeatureMatrix& m, std::ostream& out,
                      std::string_view metadata) {
  if (!metadata.empty()) out << "# " << metadata << '\n';
  out << "subject_id,label";
  for (const auto& n : m.feature_names) out << ',' << n;
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << m.subject_ids[r] << ',' << (m.labels[r] == 1 ? "PD" : "H");
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out << ',';
      if (m.missing(r, c))
        out << "NA";
      else
        out << format_double(m.values(r, c));
    }
    out << '\n';
  }
}

FeatureMatrix read_matrix_csv(const std::filesystem::path& path, int task_id,
                              Modality modality) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  FeatureMatrix m;
  m.task_id = task_id;
  m.modality = modality;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<double> cells;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv(line);
    if (!header) {
      if (fields.size() < 2 || fields[0] != "subject_id" || fields[1] != "label")
        throw DataError(path.string() + ": missing subject_id,label header");
      m.feature_names.assign(fields.begin() + 2, fields.end());
      header = true;
      continue;
    }
    if (fields.size() != m.feature_names.size() + 2)
      throw DataError(path.string() + ": line " + std::to_string(line_no) +
                      ": wrong number of fields");
    m.subject_ids.push_back(fields[0]);
    m.labels.push_back(ingest::parse_label(fields[1]) == Label::kPD ? 1 : 0);
    for (std::size_t c = 2; c < fields.size(); ++c) {
      const std::string& f = fields[c];
      if (f == "NA" || f.empty()) {
        cells.push_back(std::nan(""));
        continue;
      }
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw DataError(path.string() + ": line " + std::to_string(line_no) +
                        ": bad number '" + f + "'");
      cells.push_back(v);
    }
  }
  if (!header) throw DataError(path.string() + ": empty feature file");
  m.values.rows = m.subject_ids.size();
  m.values.cols = m.feature_names.size();
  m.values.data = std::move(cells);
  return m;
}

}  // namespace hwpd::featurize
