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

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "hwpd/evaluation.hpp"

namespace hwpd::svm {

using nlohmann::json;
using ingest::Modality;

namespace {

json params_json(const RbfParams& p) {
  return {{"C", p.c}, {"gamma", p.gamma_width}};
}

RbfParams params_from(const json& j) {
  return {j.at("C").get<double>(), j.at("gamma").get<double>()};
}

}  // namespace

std::string report_to_json(const EvaluationReport& r) {
  json j;
  j["tool_version"] = r.tool_version;
  j["seed"] = r.seed;
  j["config_hash"] = r.config_hash;
  j["folds"] = r.folds;
  j["alpha"] = r.alpha;
  j["shuffled_labels"] = r.shuffled_labels;
  j["grid"] = {{"C", r.grid.c_values},
               {"gamma", r.grid.gamma_values},
               {"points", r.grid.size()},
               {"kernel", "exp(-|u-v|^2 / (2 gamma^2))"}};
  json runs = json::array();
  for (const auto& run : r.runs) {
    json jr;
    jr["protocol"] = protocol_name(run.protocol);
    jr["nested"] = run.nested;
    json cells = json::array();
    for (const auto& c : run.cells) {
      json jc;
      jc["task"] = c.task_id == 0 ? json("all") : json(c.task_id);
      jc["modality"] = std::string(ingest::modality_name(c.modality));
      jc["available"] = c.available;
      jc["subjects"] = c.subjects;
      jc["features_raw"] = c.features_raw;
      jc["features_kept"] = c.features_kept;
      if (c.cv) {
        jc["auc"] = c.cv->mean_auc;
        jc["fold_auc"] = c.cv->fold_auc;
        jc["best"] = params_json(c.cv->best);
        jc["folds"] = c.cv->folds;
        jc["max_kkt_residual"] = c.cv->max_kkt_residual;
        if (!c.cv->fold_params.empty()) {
          json fp = json::array();
          for (const auto& p : c.cv->fold_params) fp.push_back(params_json(p));
          jc["fold_params"] = fp;
        }
      } else {
        jc["auc"] = nullptr;
      }
      cells.push_back(jc);
    }
    jr["cells"] = cells;
    runs.push_back(jr);
  }
  j["runs"] = runs;
  return j.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& text) {
  EvaluationReport r;
  json j;
  try {
    j = json::parse(text);
    r.tool_version = j.at("tool_version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.folds = j.at("folds").get<std::size_t>();
    r.alpha = j.at("alpha").get<double>();
    r.shuffled_labels = j.at("shuffled_labels").get<bool>();
    r.grid.c_values = j.at("grid").at("C").get<std::vector<double>>();
    r.grid.gamma_values = j.at("grid").at("gamma").get<std::vector<double>>();
    for (const auto& jr : j.at("runs")) {
      ProtocolRun run;
      run.protocol = jr.at("protocol").get<std::string>() == "paper"
                         ? Protocol::kPaper
                         : Protocol::kInFold;
      run.nested = jr.at("nested").get<bool>();
      for (const auto& jc : jr.at("cells")) {
        CellResult c;
        c.task_id = jc.at("task").is_string() ? 0 : jc.at("task").get<int>();
        c.modality = ingest::parse_modality(jc.at("modality").get<std::string>());
        c.available = jc.at("available").get<bool>();
        c.subjects = jc.at("subjects").get<std::size_t>();
        c.features_raw = jc.at("features_raw").get<std::size_t>();
        c.features_kept = jc.at("features_kept").get<std::size_t>();
        if (!jc.at("auc").is_null()) {
          CvReport cv;
          cv.mean_auc = jc.at("auc").get<double>();
          cv.fold_auc = jc.at("fold_auc").get<std::vector<double>>();
          cv.best = params_from(jc.at("best"));
          cv.folds = jc.at("folds").get<std::size_t>();
          cv.max_kkt_residual = jc.at("max_kkt_residual").get<double>();
          if (jc.contains("fold_params"))
            for (const auto& p : jc.at("fold_params"))
              cv.fold_params.push_back(params_from(p));
          cv.protocol = run.protocol;
          cv.nested = run.nested;
          cv.seed = r.seed;
          cv.grid_points = r.grid.size();
          c.cv = cv;
        }
        run.cells.push_back(std::move(c));
      }
      r.runs.push_back(std::move(run));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string render_table(const EvaluationReport& r) {
  std::ostringstream out;
  out << "hwpd " << r.tool_version << "  seed " << r.seed << "  config "
      << r.config_hash << "\n";
  out << r.folds << "-fold CV, " << r.grid.size() << " grid points, alpha "
      << r.alpha << (r.shuffled_labels ? ", labels shuffled" : "") << "\n";
  for (const auto& run : r.runs) {
    out << "\nAUC [%] (" << run.label() << ")\n";
    char line[128];
    std::snprintf(line, sizeof(line), "%-15s %12s %12s %12s\n", "task/modality",
                  "on-surface", "in-air", "pressure");
    out << line;
    for (int task = 1; task <= 8; ++task) {
      const int id = task == 8 ? 0 : task;
      std::string cols[3];
      int k = 0;
      for (Modality m : ingest::kAllModalities) {
        const CellResult* c = run.find(id, m);
        if (c && c->available && c->cv) {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * c->cv->mean_auc);
          cols[k] = buf;
        } else {
          cols[k] = "-";
        }
        ++k;
      }
      std::snprintf(line, sizeof(line), "%-15s %12s %12s %12s\n",
                    id == 0 ? "all" : std::to_string(id).c_str(),
                    cols[0].c_str(), cols[1].c_str(), cols[2].c_str());
      out << line;
    }
  }
  return out.str();
}

}  // namespace hwpd::svm
