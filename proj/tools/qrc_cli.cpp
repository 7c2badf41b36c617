// Copyright 2026 The QRC Authors
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

// Command-line front end: gen-data, run, sweep, report, validate-oracle.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrc/config.hpp"
#include "qrc/datasets.hpp"
#include "qrc/experiment.hpp"
#include "qrc/fock.hpp"
#include "qrc/io.hpp"

namespace {

namespace fs = std::filesystem;

struct Common {
  std::vector<std::string> configs;
  std::vector<std::string> overrides;
  std::string out = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  std::string cache;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.configs, "Config file; repeat to layer, later files win")->check(CLI::ExistingFile);
  cmd->add_option("--set", c.overrides, "Override a key, e.g. --set budget.frames=500");
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&c](std::uint64_t s) {
        c.seed = s;
        c.seed_set = true;
      }, "Master seed");
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--cache", c.cache, "Acquisition cache directory (default: $QRC_CACHE_DIR)");
}

qrc::ExperimentConfig resolve(const Common& c) {
  qrc::Config cfg = qrc::Config::load_layers(c.configs);
  for (const auto& o : c.overrides) cfg.apply_override(o);
  if (c.seed_set) cfg.set("experiment.seed", std::to_string(c.seed));
  return qrc::ExperimentConfig::from_config(cfg);
}

qrc::RunOptions options(const Common& c) {
  qrc::RunOptions o;
  o.threads = c.threads;
  o.cache_dir = c.cache;
  if (o.cache_dir.empty())
    if (const char* env = std::getenv("QRC_CACHE_DIR")) o.cache_dir = env;
  return o;
}

void print_reports(const std::vector<qrc::RunReport>& reports) {
  for (const auto& r : reports)
    std::cout << r.config.task << " " << qrc::to_string(r.config.source) << " " << r.kind << ": accuracy "
              << r.mean << " +/- " << r.std << " over " << r.reps.size() << " repetitions\n";
}

int cmd_gen_data(const Common& c) {
  std::uint64_t seed = c.seed_set ? c.seed : 1;
  fs::create_directories(c.out);
  if (!c.configs.empty()) {
    qrc::ExperimentConfig e = resolve(c);
    qrc::Dataset ds = qrc::load_task(e);
    std::string path = (fs::path(c.out) / (e.task + ".csv")).string();
    qrc::write_dataset_csv(path, ds);
    std::cout << path << "\n";
    return 0;
  }
  std::vector<std::pair<std::string, qrc::Dataset>> sets = {
      {"moons.csv", qrc::make_moons_multiclass(600, 4, 0.1, seed)},
      {"blobs.csv", qrc::make_blobs(600, 5, 1.0, 10.0, seed)},
      {"vowels.csv", qrc::make_vowels_synthetic(37, seed)},
  };
  for (const auto& [name, ds] : sets) {
    std::string path = (fs::path(c.out) / name).string();
    qrc::write_dataset_csv(path, ds);
    std::cout << path << "\n";
  }
  return 0;
}

int cmd_run(const Common& c) {
  qrc::ExperimentConfig e = resolve(c);
  auto reports = qrc::run_experiment(e, options(c));
  for (const auto& p : qrc::emit_outputs(reports, c.out)) std::cout << p << "\n";
  print_reports(reports);
  return 0;
}

int cmd_sweep(const Common& c, std::string axis, std::vector<double> values) {
  qrc::ExperimentConfig e = resolve(c);
  if (axis.empty()) axis = e.sweep_axis;
  if (values.empty()) values = e.sweep_values;
  if (axis.empty()) throw std::invalid_argument("sweep: no axis given (--axis or sweep.axis)");
  auto reports = qrc::sweep(e, axis, values, options(c));
  for (const auto& p : qrc::emit_sweep(axis, values, reports, c.out)) std::cout << p << "\n";
  for (std::size_t v = 0; v < values.size(); ++v) {
    std::cout << axis << " = " << values[v] << "\n";
    print_reports(reports[v]);
  }
  for (const auto& t : qrc::sweep_trends(axis, values, reports))
    std::cout << t.kind << ": spearman rho " << t.rho << ", p " << t.p_value << "\n";
  return 0;
}

int cmd_report(const std::string& in, const std::string& out) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(in))
    if (entry.is_regular_file() && entry.path().filename().string().rfind("metrics_", 0) == 0 &&
        entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::ostringstream csv;
  csv << "file,task,source,feature_kind,classifier,frames,accuracy_mean,accuracy_std,repetitions\n";
  for (const auto& f : files) {
    auto j = nlohmann::json::parse(qrc::read_text(f.string()));
    std::string rel = fs::relative(f, in).string();
    csv << qrc::csv_escape(rel) << "," << j["task"].get<std::string>() << "," << j["source"].get<std::string>()
        << "," << j["feature_kind"].get<std::string>() << "," << j["classifier"].get<std::string>() << ","
        << j["frames"].get<long>() << "," << qrc::format_double(j["accuracy_mean"].get<double>()) << ","
        << qrc::format_double(j["accuracy_std"].get<double>()) << "," << j["repetitions"].size() << "\n";
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    fs::create_directories(out);
    std::string path = (fs::path(out) / "summary.csv").string();
    qrc::write_text(path, csv.str());
    std::cout << path << "\n";
  }
  return 0;
}

int cmd_validate_oracle(const Common& c, int configs, double tol) {
  qrc::OracleCheckOptions o;
  o.configs = configs;
  o.seed = c.seed_set ? c.seed : 1;
  auto t0 = std::chrono::steady_clock::now();
  qrc::OracleCheck res = qrc::check_moments_against_oracle(o);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "configs " << res.configs << ", worst relative error " << res.worst << " (config " << res.worst_index
            << "), " << secs << " s\n";
  bool ok = res.worst <= tol;
  std::cout << (ok ? "PASS" : "FAIL") << " tolerance " << tol << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photonic reservoir computing simulator"};
  app.require_subcommand(1);
  Common common;

  auto* gen = app.add_subcommand("gen-data", "Write the synthetic datasets as CSV");
  add_common(gen, common);
  auto* run = app.add_subcommand("run", "Run one experiment");
  add_common(run, common);
  auto* sw = app.add_subcommand("sweep", "Run an experiment over one axis");
  add_common(sw, common);
  std::string axis;
  std::vector<double> values;
  sw->add_option("--axis", axis, "classes | frames | modes | power");
  sw->add_option("--values", values, "Axis values")->delimiter(',');
  auto* rep = app.add_subcommand("report", "Summarize metrics files into one CSV");
  std::string report_in, report_out;
  rep->add_option("--in", report_in, "Directory holding run outputs")->required()->check(CLI::ExistingDirectory);
  rep->add_option("--out", report_out, "Directory for summary.csv (default: stdout)");
  auto* val = app.add_subcommand("validate-oracle", "Compare analytic moments with the Fock oracle");
  add_common(val, common);
  int configs = 100;
  double tol = 1e-6;
  val->add_option("--configs", configs, "Random circuits")->capture_default_str();
  val->add_option("--tol", tol, "Relative error tolerance")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_gen_data(common);
    if (*run) return cmd_run(common);
    if (*sw) return cmd_sweep(common, axis, values);
    if (*rep) return cmd_report(report_in, report_out);
    if (*val) return cmd_validate_oracle(common, configs, tol);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
