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

#include "hwpd/cli.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hwpd/evaluation.hpp"
#include "hwpd/featurize.hpp"
#include "hwpd/ingest.hpp"
#include "hwpd/mann_whitney.hpp"

namespace hwpd::cli {

namespace fs = std::filesystem;
using ingest::Modality;

std::string config_hash(std::string_view canonical) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void log(const std::string& msg) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "hwpd: " << msg << '\n';
}

std::string metadata_line(std::uint64_t seed, const std::string& hash) {
  return std::string("hwpd ") + kToolVersion + " seed=" + std::to_string(seed) +
         " config=" + hash;
}

// Refuses to clobber an existing file unless forced.
void check_writable(const fs::path& p, bool force) {
  if (fs::exists(p) && !force)
    throw UsageError(p.string() + " exists; pass --force to overwrite");
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

std::pair<int, int> parse_range(const std::string& text) {
  auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("bad exponent range '" + text + "' (expected lo:hi)");
  }
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  int n_pd = 0;
  int n_control = 0;
  std::uint64_t seed = 42;
  std::string out;
  bool force = false;
};

void cmd_synth(const SynthArgs& a) {
  if (a.n_pd < 1 || a.n_control < 1)
    throw UsageError("synth needs at least one subject per class");
  const fs::path out(a.out);
  if (fs::exists(out) && !a.force)
    throw UsageError(out.string() + " exists; pass --force to overwrite");
  fs::create_directories(out);
  const std::string hash = config_hash(
      "synth;n_pd=" + std::to_string(a.n_pd) + ";n_control=" +
      std::to_string(a.n_control) + ";seed=" + std::to_string(a.seed));
  auto cohort = ingest::synthesize_cohort(a.n_pd, a.n_control, a.seed);
  std::vector<ingest::ManifestEntry> manifest;
  for (const auto& rec : cohort) {
    ingest::write_recording(rec, out / ingest::recording_filename(rec.subject_id, rec.task_id));
    if (rec.task_id == 1) manifest.push_back({rec.subject_id, rec.label});
  }
  auto mf = open_output(out / "manifest.csv");
  mf << "# " << metadata_line(a.seed, hash) << '\n';
  ingest::write_manifest(manifest, mf);
  log("wrote " + std::to_string(cohort.size()) + " recordings for " +
      std::to_string(manifest.size()) + " subjects to " + out.string());
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string data;
  std::string manifest;
  std::string out;
  std::uint64_t seed = 42;
  unsigned jobs = 0;
  bool force = false;
  bool dump_emd = false;
  bool snr_exclude_residual = false;
};

void cmd_extract(const ExtractArgs& a) {
  const fs::path data(a.data);
  const fs::path manifest_path =
      a.manifest.empty() ? data / "manifest.csv" : fs::path(a.manifest);
  const fs::path out(a.out);
  const auto entries = ingest::read_manifest(manifest_path);
  if (entries.empty()) throw DataError("manifest lists no subjects");
  fs::create_directories(out);
  for (int task = 1; task <= 7; ++task)
    for (Modality m : ingest::kAllModalities)
      check_writable(out / featurize::matrix_filename(task, m), a.force);
  check_writable(out / "feature_manifest.json", a.force);
  if (a.dump_emd) fs::create_directories(out / "emd");

  const std::string hash = config_hash(
      std::string("extract;snr_residual=") + (a.snr_exclude_residual ? "0" : "1"));

  struct Unit {
    const ingest::ManifestEntry* subject;
    int task;
  };
  std::vector<Unit> units;
  for (const auto& e : entries)
    for (int task = 1; task <= 7; ++task) units.push_back({&e, task});

  std::vector<std::vector<featurize::SubjectFeatures>> results(units.size());
  std::atomic<std::size_t> failures{0};
  parallel_for(units.size(), a.jobs, [&](std::size_t u) {
    const auto& unit = units[u];
    const fs::path file =
        data / ingest::recording_filename(unit.subject->subject_id, unit.task);
    ingest::PenRecording rec;
    try {
      if (!fs::exists(file)) throw DataError("missing recording " + file.string());
      rec = ingest::parse_recording(file, [&](const std::string& w) {
        log("warning: " + file.filename().string() + ": " + w);
      });
      rec.subject_id = unit.subject->subject_id;
      rec.task_id = unit.task;
      rec.label = unit.subject->label;
    } catch (const DataError& e) {
      log(std::string("warning: ") + e.what() + "; subject " +
          unit.subject->subject_id + " excluded from task " +
          std::to_string(unit.task));
      ++failures;
      return;
    }
    for (Modality m : ingest::kAllModalities) {
      featurize::ExtractionOptions opts;
      opts.emd_snr_includes_residual = !a.snr_exclude_residual;
      if (a.dump_emd) {
        opts.on_decomposition = [&](std::string_view channel,
                                    const emd::Decomposition& d) {
          fs::path p = out / "emd" /
                       (rec.subject_id + "__" + std::to_string(rec.task_id) +
                        "__" + std::string(ingest::modality_name(m)) + "__" +
                        std::string(channel) + ".csv");
          auto f = open_output(p);
          emd::write_decomposition_csv(d, f);
        };
      }
      results[u].push_back({rec.subject_id, rec.label, rec.task_id, m,
                            featurize::extract_features(rec, m, opts)});
    }
  });

  std::vector<featurize::SubjectFeatures> all;
  for (auto& r : results)
    for (auto& s : r) all.push_back(std::move(s));

  nlohmann::json jm;
  jm["tool_version"] = kToolVersion;
  jm["seed"] = a.seed;
  jm["config_hash"] = hash;
  jm["subjects"] = entries.size();
  jm["excluded_recordings"] = failures.load();
  nlohmann::json counts = nlohmann::json::object();
  std::map<Modality, std::size_t> per_modality;
  std::size_t total = 0;
  for (int task = 1; task <= 7; ++task) {
    for (Modality m : ingest::kAllModalities) {
      featurize::FeatureMatrix fm = featurize::assemble(all, task, m, [&](const std::string& w) {
        log("warning: " + w);
      });
      auto f = open_output(out / featurize::matrix_filename(task, m));
      featurize::write_matrix_csv(fm, f, metadata_line(a.seed, hash));
      counts[std::string(ingest::modality_name(m))][std::to_string(task)] = {
          {"rows", fm.rows()}, {"features", fm.cols()}};
      per_modality[m] = std::max(per_modality[m], fm.cols());
      total += fm.cols();
      if (task == 1) jm["features"][std::string(ingest::modality_name(m))] = fm.feature_names;
    }
  }
  jm["counts"] = counts;
  jm["total_features"] = total;
  auto f = open_output(out / "feature_manifest.json");
  f << jm.dump(2) << '\n';
  for (Modality m : ingest::kAllModalities)
    log(std::string(ingest::modality_name(m)) + ": " +
        std::to_string(per_modality[m]) + " raw features per task");
  log("total raw features over 7 tasks x 3 modalities: " + std::to_string(total));
}

svm::CohortMatrices load_matrices(const fs::path& dir) {
  svm::CohortMatrices out;
  for (int task = 1; task <= 7; ++task)
    for (Modality m : ingest::kAllModalities) {
      fs::path p = dir / featurize::matrix_filename(task, m);
      if (!fs::exists(p)) throw DataError("missing feature file " + p.string());
      out[{task, m}] = featurize::read_matrix_csv(p, task, m);
    }
  return out;
}

// ---------------------------------------------------------------- filter

struct FilterArgs {
  std::string features;
  std::string out;
  double alpha = 0.05;
  std::uint64_t seed = 42;
  bool force = false;
};

void cmd_filter(const FilterArgs& a) {
  auto matrices = load_matrices(a.features);
  const fs::path out(a.out);
  fs::create_directories(out);
  std::ostringstream alpha_text;
  alpha_text << a.alpha;
  const std::string hash = config_hash("filter;alpha=" + alpha_text.str());
  std::ostringstream summary;
  char line[128];
  std::snprintf(line, sizeof(line), "%-6s %12s %12s %12s\n", "task", "on-surface",
                "in-air", "pressure");
  summary << "features passing the U-test (alpha " << a.alpha << ") / raw\n" << line;
  for (int task = 1; task <= 7; ++task) {
    std::string cols[3];
    int k = 0;
    for (Modality m : ingest::kAllModalities) {
      const auto& fm = matrices.at({task, m});
      auto [kept, rep] = featurize::filter_features(fm, a.alpha);
      std::string name = "filter_t" + std::to_string(task) + "_" +
                         std::string(ingest::modality_name(m)) + ".csv";
      check_writable(out / name, a.force);
      auto f = open_output(out / name);
      featurize::write_filter_report_csv(rep, f, metadata_line(a.seed, hash));
      cols[k++] = std::to_string(rep.kept_count()) + "/" + std::to_string(fm.cols());
    }
    std::snprintf(line, sizeof(line), "%-6d %12s %12s %12s\n", task,
                  cols[0].c_str(), cols[1].c_str(), cols[2].c_str());
    summary << line;
  }
  std::cout << summary.str();
  check_writable(out / "filter_summary.txt", a.force);
  auto f = open_output(out / "filter_summary.txt");
  f << "# " << metadata_line(a.seed, hash) << '\n' << summary.str();
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string features;
  std::string out;
  std::uint64_t seed = 42;
  std::size_t folds = 10;
  double alpha = 0.05;
  std::string grid_c = "-10:7";
  std::string grid_gamma = "-7:7";
  bool paper_protocol = false;
  bool nested = false;
  bool shuffle_labels = false;
  bool no_filter = false;
  unsigned jobs = 0;
  bool force = false;
};

void cmd_evaluate(const EvaluateArgs& a) {
  const fs::path out(a.out);
  fs::create_directories(out);
  check_writable(out / "report.json", a.force);
  check_writable(out / "report.txt", a.force);
  auto [c_lo, c_hi] = parse_range(a.grid_c);
  auto [g_lo, g_hi] = parse_range(a.grid_gamma);
  if (a.folds < 2) throw UsageError("--folds must be at least 2");
  if (!(a.alpha > 0.0 && a.alpha <= 1.0)) throw UsageError("--alpha must lie in (0, 1]");

  svm::EvaluateOptions opts;
  opts.cv.folds = a.folds;
  opts.cv.seed = a.seed;
  opts.cv.alpha = a.alpha;
  opts.cv.filter = !a.no_filter;
  opts.grid = svm::Grid::from_exponents(c_lo, c_hi, g_lo, g_hi);
  opts.shuffle_labels = a.shuffle_labels;
  opts.jobs = a.jobs;
  opts.runs = {{svm::Protocol::kInFold, false}};
  if (a.nested) opts.runs.push_back({svm::Protocol::kInFold, true});
  if (a.paper_protocol) {
    opts.runs.push_back({svm::Protocol::kPaper, false});
    if (a.nested) opts.runs.push_back({svm::Protocol::kPaper, true});
  }
  std::ostringstream canon;
  canon << "evaluate;seed=" << a.seed << ";folds=" << a.folds << ";alpha=" << a.alpha
        << ";grid_c=" << c_lo << ":" << c_hi << ";grid_gamma=" << g_lo << ":"
        << g_hi << ";paper=" << a.paper_protocol << ";nested=" << a.nested
        << ";shuffle=" << a.shuffle_labels << ";filter=" << !a.no_filter;
  opts.config_hash = config_hash(canon.str());

  auto matrices = load_matrices(a.features);
  std::mutex seen_mutex;
  std::set<std::string> seen;
  auto report = svm::evaluate_all(matrices, opts, [&](const std::string& w) {
    std::lock_guard lock(seen_mutex);
    if (seen.insert(w).second) log("warning: " + w);
  });
  const std::string table = svm::render_table(report);
  {
    auto f = open_output(out / "report.json");
    f << svm::report_to_json(report);
  }
  {
    auto f = open_output(out / "report.txt");
    f << table;
  }
  std::cout << table;
}

void cmd_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::cout << svm::render_table(svm::report_from_json(ss.str()));
}

// CLI11 reads config files for the top-level app only, so a subcommand's
// --config file is expanded into --key=value arguments placed right after
// the subcommand name. Later command-line options win.
std::vector<std::string> expand_config(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  if (args.size() < 2) return args;
  std::string file;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) file = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) file = args[i].substr(9);
  }
  if (file.empty()) return args;
  if (!fs::exists(file)) throw UsageError("config file " + file + " not found");
  std::vector<std::string> injected;
  for (const auto& item : CLI::ConfigINI().from_file(file)) {
    if (!item.parents.empty() &&
        !(item.parents.size() == 1 && (item.parents[0] == args[1] || item.parents[0] == "default")))
      continue;
    if (item.name == "++" || item.name == "--" || item.name == "config") continue;
    for (const auto& v : item.inputs) injected.push_back("--" + item.name + "=" + v);
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

}  // namespace

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return kUsageError;
  }
  std::string config_path;
  CLI::App app{"Handwriting modality features and RBF-SVM evaluation", "hwpd"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate a labelled synthetic cohort");
  synth->add_option("--config", config_path, "INI file of option defaults");
  synth->add_option("n_pd", sa.n_pd, "Parkinsonian subjects")->required();
  synth->add_option("n_control", sa.n_control, "Control subjects")->required();
  synth->add_option("--seed", sa.seed, "Generator seed");
  synth->add_option("--out", sa.out, "Output directory")->required();
  synth->add_flag("--force", sa.force, "Overwrite existing output");

  ExtractArgs ea;
  ea.jobs = default_jobs();
  auto* extract = app.add_subcommand("extract", "Extract features per task and modality");
  extract->add_option("--config", config_path, "INI file of option defaults");
  extract->add_option("--data", ea.data, "Directory of .svc recordings")->required();
  extract->add_option("--manifest", ea.manifest, "subject_id,label CSV (default <data>/manifest.csv)");
  extract->add_option("--out", ea.out, "Output directory")->required();
  extract->add_option("--seed", ea.seed, "Seed recorded in artifacts");
  extract->add_option("--jobs", ea.jobs, "Worker threads");
  extract->add_flag("--force", ea.force, "Overwrite existing output");
  extract->add_flag("--dump-emd", ea.dump_emd, "Write every decomposition as CSV");
  extract->add_flag("--emd-snr-exclude-residual", ea.snr_exclude_residual,
                    "Leave the EMD residual out of the intrinsic SNR denominator");

  FilterArgs fa;
  auto* filter = app.add_subcommand("filter", "Whole-cohort Mann-Whitney U filtering report");
  filter->add_option("--config", config_path, "INI file of option defaults");
  filter->add_option("--features", fa.features, "Directory written by extract")->required();
  filter->add_option("--out", fa.out, "Output directory")->required();
  filter->add_option("--alpha", fa.alpha, "Significance level");
  filter->add_option("--seed", fa.seed, "Seed recorded in artifacts");
  filter->add_flag("--force", fa.force, "Overwrite existing output");

  EvaluateArgs va;
  va.jobs = default_jobs();
  auto* evaluate = app.add_subcommand("evaluate", "Grid-searched RBF-SVM cross-validated AUC");
  evaluate->add_option("--config", config_path, "INI file of option defaults");
  evaluate->add_option("--features", va.features, "Directory written by extract")->required();
  evaluate->add_option("--out", va.out, "Output directory")->required();
  evaluate->add_option("--seed", va.seed, "Fold assignment seed");
  evaluate->add_option("--folds", va.folds, "Cross-validation folds");
  evaluate->add_option("--alpha", va.alpha, "U-test significance level");
  evaluate->add_option("--grid-c", va.grid_c, "log2 range of C, lo:hi");
  evaluate->add_option("--grid-gamma", va.grid_gamma, "log2 range of the kernel width, lo:hi");
  evaluate->add_flag("--paper-protocol", va.paper_protocol,
                     "Also report whole-cohort preprocessing before CV");
  evaluate->add_flag("--nested", va.nested, "Also report nested 5-fold selection");
  evaluate->add_flag("--shuffle-labels", va.shuffle_labels, "Permute labels (null control)");
  evaluate->add_flag("--no-filter", va.no_filter, "Skip U-test feature filtering");
  evaluate->add_option("--jobs", va.jobs, "Worker threads");
  evaluate->add_flag("--force", va.force, "Overwrite existing output");

  std::string report_path;
  auto* report = app.add_subcommand("report", "Render a report.json as a table");
  report->add_option("report", report_path, "report.json")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*synth) cmd_synth(sa);
    else if (*extract) cmd_extract(ea);
    else if (*filter) cmd_filter(fa);
    else if (*evaluate) cmd_evaluate(va);
    else if (*report) cmd_report(report_path);
  } catch (const UsageError& e) {
    log(std::string("error: ") + e.what());
    return kUsageError;
  } catch (const ConvergenceError& e) {
    log(std::string("error: ") + e.what() +
        " (best KKT residual " + std::to_string(e.best_residual) + ")");
    return kConvergenceError;
  } catch (const DataError& e) {
    log(std::string("error: ") + e.what());
    return kDataError;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return kDataError;
  }
  return kOk;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("hwpd");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace hwpd::cli
