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

// End-to-end pipeline: encode, simulate, estimate, select, train, evaluate.

#ifndef QRC_EXPERIMENT_HPP_
#define QRC_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "qrc/classifiers.hpp"
#include "qrc/config.hpp"
#include "qrc/datasets.hpp"
#include "qrc/encoding.hpp"
#include "qrc/features.hpp"
#include "qrc/frames.hpp"

namespace qrc {

inline constexpr const char* kQrcVersion = "0.1.0";

struct ExperimentConfig {
  // [experiment]
  std::string task = "moons";  // moons | blobs | vowels | mnist
  std::uint64_t seed = 1;
  int repetitions = 5;

  // [data]
  std::uint64_t data_seed = 1;
  long samples = 600;
  int classes = 4;
  double moons_noise = 0.1;
  double blobs_sigma = 1.0;
  double blobs_box = 10.0;
  std::string vowels_path;  // empty: synthetic table
  int vowels_per_class = 37;
  std::string mnist_images = "data/mnist/images.idx";
  std::string mnist_labels = "data/mnist/labels.idx";
  int mnist_per_class = 300;
  int mnist_components = 100;

  // [split]
  double train = 0.9;
  double test = 0.1;
  double select_fraction = 0.08;  // of the whole dataset, carved from train for choosing k

  // [source]
  SourceKind source = SourceKind::squeezed;
  SourceProfile profile;

  // [budget]
  double target_photons = 1.76e5;  // detected photons per sample at budget_frames
  long budget_frames = 5000;
  double power_scale = 1.0;

  // [simulation]
  std::string sampling = "auto";  // auto | exact_small | classical_mixture | estimator_asymptotic
  long frames = 0;                // 0: budget_frames

  // [reservoir]
  int modes = 32;
  int layers = 2;
  std::uint64_t reservoir_seed = 7;
  double transmission = 0.6;

  // [encoder]
  double sigma_g = 8.0;
  double scale = 3.141592653589793;
  double chirp = -1.0;  // < 0: encoder default
  int window_lo = 576;
  int window_hi = 1344;
  std::string compensation = "window";  // window | row
  double feature_lo = -1.0;
  double feature_hi = 1.0;

  // [detection]
  int pixels = 0;  // 0: one pixel per mode
  double efficiency = 0.71;
  double readout_sigma = 0.05;

  // [features]
  std::vector<std::string> kinds = {"covariance"};  // covariance | mean_field | raw
  std::vector<long> k_grid = {16, 32, 64, 128, 256, 512, 1024};
  bool select = true;
  long n_lambda = -1;                   // informative central pixels, -1: all
  std::string restrict_method = "restrict";  // restrict | erase

  // [classifier]
  ModelKind classifier = ModelKind::svm_ovo;
  double svm_c = 1.0;
  double svm_tol = 1e-8;
  double ridge_lambda = 1.0;
  LogisticOptions logistic;
  SgdOptions sgd;

  // [sweep]
  std::string sweep_axis;  // classes | frames | modes | power
  std::vector<double> sweep_values;

  // Unknown keys are an error.
  static ExperimentConfig from_config(const Config& c);
  Config to_config() const;
  void validate() const;
  std::string hash() const;  // code version + canonical config text

  long acquisition_frames() const { return frames > 0 ? frames : budget_frames; }
  int detector_pixels() const { return pixels > 0 ? pixels : modes; }
  SamplingMode sampling_mode() const;
  bool needs_reservoir() const;
};

struct RunOptions {
  int threads = 1;
  std::string cache_dir;  // empty: no cache
};

struct RepetitionResult {
  int rep = 0;
  double accuracy = 0.0;
  int k = 0;  // selected feature count, 0 when no selection ran
  SelectionMask selection;
  long feature_count = 0;
  Metrics metrics;
};

struct RunReport {
  ExperimentConfig config;  // echo, with kinds = {kind}
  std::string kind;
  std::string config_hash;
  std::vector<RepetitionResult> reps;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation over repetitions
  Vec photon_totals;  // detected photons per sample (first repetition for mnist)
  double expected_total = 0.0;
  double input_photons = 0.0;
  long frames = 0;
  double wall_seconds = 0.0;
};

// Dataset before any scaling; mnist returns raw pixels.
Dataset load_task(const ExperimentConfig& cfg);

struct Pipeline {
  EncoderConfig encoder;
  ReservoirConfig reservoir;
  DetectionModel detection;
  SourceBudget budget;
};

Pipeline make_pipeline(const ExperimentConfig& cfg, int dims);

struct SimulatedFeatures {
  std::vector<ReservoirFeatures> features;
  Vec photon_totals;
};

// One acquisition per row of x (already scaled to the encoder range).
SimulatedFeatures simulate_features(const ExperimentConfig& cfg, const Pipeline& pipe, const Mat& x,
                                    std::uint64_t rep_key, const RunOptions& opt);

LinearModel train_classifier(const ExperimentConfig& cfg, const Mat& x, const IVec& labels, int rep, int threads);

// Split, standardize, optional ANOVA selection with k chosen on an inner
// validation split, train, evaluate on the test rows.
RepetitionResult fit_and_score(const ExperimentConfig& cfg, const Mat& features, const IVec& labels, int rep,
                               bool select, int threads);

// One report per entry of cfg.kinds; all kinds share the same acquisitions.
std::vector<RunReport> run_experiment(const ExperimentConfig& cfg, const RunOptions& opt);

ExperimentConfig with_axis_value(const ExperimentConfig& cfg, const std::string& axis, double value);

// reports[v][k]: sweep value v, feature kind k.
std::vector<std::vector<RunReport>> sweep(const ExperimentConfig& cfg, const std::string& axis,
                                          const std::vector<double>& values, const RunOptions& opt);

double spearman(const std::vector<double>& x, const std::vector<double>& y);
// One-sided permutation p-value for rho >= observed.
double spearman_pvalue(const std::vector<double>& x, const std::vector<double>& y, int permutations,
                       std::uint64_t seed);

struct TrendSummary {
  std::string kind;
  double rho = 0.0;
  double p_value = 1.0;
};

// Spearman rank correlation of accuracy against the axis value, pooled over
// repetitions.
std::vector<TrendSummary> sweep_trends(const std::string& axis, const std::vector<double>& values,
                                       const std::vector<std::vector<RunReport>>& reports);

// Writes metrics JSON, confusion CSV, photon CSV, config echo and a separate
// timing JSON per report. Returns the written paths.
std::vector<std::string> emit_outputs(const std::vector<RunReport>& reports, const std::string& out_dir);
std::vector<std::string> emit_sweep(const std::string& axis, const std::vector<double>& values,
                                    const std::vector<std::vector<RunReport>>& reports, const std::string& out_dir);

std::string metrics_json(const RunReport& r);
std::string sweep_csv(const std::string& axis, const std::vector<double>& values,
                      const std::vector<std::vector<RunReport>>& reports);

}  // namespace qrc

#endif  // QRC_EXPERIMENT_HPP_
