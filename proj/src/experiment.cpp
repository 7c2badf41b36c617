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

#include "qrc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <type_traits>

#include <json.hpp>

#include "qrc/io.hpp"
#include "qrc/parallel.hpp"
#include "qrc/rng.hpp"

namespace qrc {

namespace {

using Json = nlohmann::ordered_json;

// Every config key and the field it maps to. Reading and writing share this
// table so the text form round-trips.
template <class E, class V>
void visit_fields(E& e, V&& v) {
  v("experiment.task", e.task);
  v("experiment.seed", e.seed);
  v("experiment.repetitions", e.repetitions);
  v("data.seed", e.data_seed);
  v("data.samples", e.samples);
  v("data.classes", e.classes);
  v("data.moons_noise", e.moons_noise);
  v("data.blobs_sigma", e.blobs_sigma);
  v("data.blobs_box", e.blobs_box);
  v("data.vowels_path", e.vowels_path);
  v("data.vowels_per_class", e.vowels_per_class);
  v("data.mnist_images", e.mnist_images);
  v("data.mnist_labels", e.mnist_labels);
  v("data.mnist_per_class", e.mnist_per_class);
  v("data.mnist_components", e.mnist_components);
  v("split.train", e.train);
  v("split.test", e.test);
  v("split.select_fraction", e.select_fraction);
  v("source.kind", e.source);
  v("source.squeezing", e.profile.squeezing);
  v("source.squeezing_decay", e.profile.squeezing_decay);
  v("source.thermal_width", e.profile.thermal_width);
  v("source.supercontinuum_width", e.profile.supercontinuum_width);
  v("source.supercontinuum_g", e.profile.supercontinuum_g);
  v("source.coherent", e.profile.coherent);
  v("source.r_cap", e.profile.r_cap);
  v("budget.target_photons", e.target_photons);
  v("budget.frames", e.budget_frames);
  v("budget.power_scale", e.power_scale);
  v("simulation.sampling", e.sampling);
  v("simulation.frames", e.frames);
  v("reservoir.modes", e.modes);
  v("reservoir.layers", e.layers);
  v("reservoir.seed", e.reservoir_seed);
  v("reservoir.transmission", e.transmission);
  v("encoder.sigma_g", e.sigma_g);
  v("encoder.scale", e.scale);
  v("encoder.chirp", e.chirp);
  v("encoder.window_lo", e.window_lo);
  v("encoder.window_hi", e.window_hi);
  v("encoder.compensation", e.compensation);
  v("encoder.feature_lo", e.feature_lo);
  v("encoder.feature_hi", e.feature_hi);
  v("detection.pixels", e.pixels);
  v("detection.efficiency", e.efficiency);
  v("detection.readout_sigma", e.readout_sigma);
  v("features.kind", e.kinds);
  v("features.k_grid", e.k_grid);
  v("features.select", e.select);
  v("features.n_lambda", e.n_lambda);
  v("features.restrict_method", e.restrict_method);
  v("classifier.kind", e.classifier);
  v("classifier.c", e.svm_c);
  v("classifier.tol", e.svm_tol);
  v("classifier.lambda", e.ridge_lambda);
  v("classifier.logistic_l2", e.logistic.l2);
  v("classifier.logistic_grad_tol", e.logistic.grad_tol);
  v("classifier.logistic_max_iter", e.logistic.max_iter);
  v("classifier.sgd_lr", e.sgd.lr);
  v("classifier.sgd_beta1", e.sgd.beta1);
  v("classifier.sgd_beta2", e.sgd.beta2);
  v("classifier.sgd_eps", e.sgd.eps);
  v("classifier.sgd_epochs", e.sgd.epochs);
  v("classifier.sgd_batch", e.sgd.batch);
  v("classifier.sgd_l2", e.sgd.l2);
  v("sweep.axis", e.sweep_axis);
  v("sweep.values", e.sweep_values);
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, std::string>) {
      out += xs[i];
    } else if constexpr (std::is_floating_point_v<T>) {
      out += format_double(xs[i]);
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

struct Reader {
  const Config& c;
  std::set<std::string>& known;
  void operator()(const std::string& k, std::string& f) { known.insert(k); f = c.get(k, f); }
  void operator()(const std::string& k, double& f) { known.insert(k); f = c.get_double(k, f); }
  void operator()(const std::string& k, bool& f) { known.insert(k); f = c.get_bool(k, f); }
  void operator()(const std::string& k, std::uint64_t& f) { known.insert(k); f = c.get_u64(k, f); }
  void operator()(const std::string& k, long& f) { known.insert(k); f = c.get_long(k, f); }
  void operator()(const std::string& k, int& f) {
    known.insert(k);
    long v = c.get_long(k, f);
    if (v < INT32_MIN || v > INT32_MAX) throw std::invalid_argument("config " + k + ": out of range");
    f = static_cast<int>(v);
  }
  void operator()(const std::string& k, std::vector<std::string>& f) {
    known.insert(k);
    if (c.has(k)) f = split_list(c.raw(k));
  }
  void operator()(const std::string& k, std::vector<long>& f) { known.insert(k); f = c.get_longs(k, f); }
  void operator()(const std::string& k, std::vector<double>& f) { known.insert(k); f = c.get_doubles(k, f); }
  void operator()(const std::string& k, SourceKind& f) {
    known.insert(k);
    if (c.has(k)) f = source_kind_from_string(c.raw(k));
  }
  void operator()(const std::string& k, ModelKind& f) {
    known.insert(k);
    if (c.has(k)) f = model_kind_from_string(c.raw(k));
  }
};

struct Writer {
  Config& c;
  void operator()(const std::string& k, const std::string& f) { c.set(k, f); }
  void operator()(const std::string& k, double f) { c.set(k, format_double(f)); }
  void operator()(const std::string& k, bool f) { c.set(k, f ? "true" : "false"); }
  void operator()(const std::string& k, std::uint64_t f) { c.set(k, std::to_string(f)); }
  void operator()(const std::string& k, long f) { c.set(k, std::to_string(f)); }
  void operator()(const std::string& k, int f) { c.set(k, std::to_string(f)); }
  template <class T>
  void operator()(const std::string& k, const std::vector<T>& f) { c.set(k, join(f)); }
  void operator()(const std::string& k, SourceKind f) { c.set(k, to_string(f)); }
  void operator()(const std::string& k, ModelKind f) { c.set(k, to_string(f)); }
};

const std::set<std::string> kTasks = {"moons", "blobs", "vowels", "mnist"};
const std::set<std::string> kKinds = {"covariance", "mean_field", "raw"};
const std::set<std::string> kAxes = {"classes", "frames", "modes", "power"};

}  // namespace

ExperimentConfig ExperimentConfig::from_config(const Config& c) {
  ExperimentConfig e;
  std::set<std::string> known;
  visit_fields(e, Reader{c, known});
  for (const auto& [k, v] : c.values())
    if (!known.count(k)) throw std::invalid_argument("unknown config key '" + k + "'");
  e.validate();
  return e;
}

Config ExperimentConfig::to_config() const {
  Config c;
  ExperimentConfig copy = *this;
  visit_fields(copy, Writer{c});
  return c;
}

std::string ExperimentConfig::hash() const {
  std::string text = std::string("qrc ") + kQrcVersion + "\n" + to_config().to_ini();
  return hex64(fnv1a(text));
}

SamplingMode ExperimentConfig::sampling_mode() const {
  if (sampling != "auto") return sampling_mode_from_string(sampling);
  if (source == SourceKind::squeezed) return modes <= 4 ? SamplingMode::exact_small : SamplingMode::estimator_asymptotic;
  return SamplingMode::classical_mixture;
}

bool ExperimentConfig::needs_reservoir() const {
  return std::any_of(kinds.begin(), kinds.end(), [](const std::string& k) { return k != "raw"; });
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
  if (!kTasks.count(task)) fail("experiment.task must be one of moons, blobs, vowels, mnist");
  if (repetitions < 1) fail("experiment.repetitions must be >= 1");
  if (samples < 1) fail("data.samples must be >= 1");
  if (classes < 2) fail("data.classes must be >= 2");
  if (train <= 0 || test <= 0 || std::abs(train + test - 1.0) > 1e-9) fail("split.train + split.test must equal 1");
  if (select_fraction < 0 || select_fraction >= train) fail("split.select_fraction must lie in [0, split.train)");
  if (!(target_photons > 0)) fail("budget.target_photons must be > 0");
  if (budget_frames < 2 || frames < 0 || (frames > 0 && frames < 2)) fail("frame counts must be >= 2");
  if (!(power_scale > 0)) fail("budget.power_scale must be > 0");
  if (sampling != "auto") sampling_mode_from_string(sampling);
  if (modes < 1 || layers < 0) fail("reservoir.modes must be >= 1 and reservoir.layers >= 0");
  if (transmission < 0 || transmission > 1) fail("reservoir.transmission must lie in [0, 1]");
  if (efficiency < 0 || efficiency > 1) fail("detection.efficiency must lie in [0, 1]");
  if (pixels < 0 || (pixels > 0 && pixels < modes)) fail("detection.pixels must be 0 or >= reservoir.modes");
  if (compensation != "window" && compensation != "row") fail("encoder.compensation must be window or row");
  if (!(feature_hi > feature_lo)) fail("encoder.feature_hi must exceed encoder.feature_lo");
  if (kinds.empty()) fail("features.kind is empty");
  for (const auto& k : kinds)
    if (!kKinds.count(k)) fail("features.kind entries must be covariance, mean_field or raw");
  if (k_grid.empty()) fail("features.k_grid is empty");
  for (long k : k_grid)
    if (k < 1) fail("features.k_grid entries must be >= 1");
  if (n_lambda < -1 || n_lambda > detector_pixels()) fail("features.n_lambda must be -1 (all) or lie in [0, pixels]");
  if (restrict_method != "restrict" && restrict_method != "erase") fail("features.restrict_method must be restrict or erase");
  if (!(svm_c > 0)) fail("classifier.c must be > 0");
  if (ridge_lambda < 0) fail("classifier.lambda must be >= 0");
  if (!sweep_axis.empty() && !kAxes.count(sweep_axis)) fail("sweep.axis must be classes, frames, modes or power");
}

Dataset load_task(const ExperimentConfig& cfg) {
  if (cfg.task == "moons") return make_moons_multiclass(cfg.samples, cfg.classes, cfg.moons_noise, cfg.data_seed);
  if (cfg.task == "blobs")
    return make_blobs(cfg.samples, cfg.classes, cfg.blobs_sigma, cfg.blobs_box, cfg.data_seed);
  if (cfg.task == "vowels") {
    Dataset ds = cfg.vowels_path.empty() ? make_vowels_synthetic(cfg.vowels_per_class, cfg.data_seed)
                                         : load_vowels(cfg.vowels_path);
    if (auto w = ds.provenance.find("warning"); w != ds.provenance.end())
      std::cerr << "warning: " << cfg.vowels_path << ": " << w->second << "\n";
    if (cfg.classes < ds.classes()) {
      std::vector<int> keep(cfg.classes);
      std::iota(keep.begin(), keep.end(), 0);
      ds = select_classes(ds, keep);
    }
    return ds;
  }
  if (cfg.classes > 10) throw std::invalid_argument("mnist: at most 10 classes");
  std::vector<int> digits(cfg.classes);
  std::iota(digits.begin(), digits.end(), 0);
  return load_mnist(cfg.mnist_images, cfg.mnist_labels, cfg.mnist_per_class, digits, cfg.data_seed);
}

Pipeline make_pipeline(const ExperimentConfig& cfg, int dims) {
  Pipeline p;
  p.encoder = EncoderConfig::defaults(dims);
  p.encoder.sigma_g = cfg.sigma_g;
  p.encoder.scale = cfg.scale;
  if (cfg.chirp >= 0) p.encoder.chirp = cfg.chirp;
  p.encoder.window_lo = cfg.window_lo;
  p.encoder.window_hi = cfg.window_hi;
  p.encoder.compensation = cfg.compensation == "row"
                               ? row_compensation(p.encoder.pixels)
                               : window_compensation(p.encoder.pixels, cfg.window_lo, cfg.window_hi);
  p.encoder.validate();
  p.reservoir = make_reservoir(cfg.modes, cfg.layers, cfg.reservoir_seed, p.encoder, cfg.transmission);
  p.detection = DetectionModel::centered(cfg.modes, cfg.detector_pixels(), cfg.efficiency, cfg.readout_sigma);
  BudgetCalibration cal = calibrate_budget({cfg.source}, cfg.target_photons * cfg.power_scale, {cfg.budget_frames},
                                           cfg.modes, p.reservoir.eta, p.detection, cfg.profile);
  p.budget = cal.sources[0];
  p.reservoir.source = p.budget.source;
  return p;
}

namespace {

std::string physics_key(const ExperimentConfig& cfg) {
  Config c = cfg.to_config();
  std::ostringstream os;
  os << kQrcVersion << "\n";
  for (const auto& [k, v] : c.values())
    for (const char* sec : {"source.", "budget.", "simulation.", "reservoir.", "encoder.", "detection.",
                            "features.n_lambda", "features.restrict_method", "experiment.seed"})
      if (k.rfind(sec, 0) == 0) os << k << "=" << v << "\n";
  return os.str();
}

}  // namespace

SimulatedFeatures simulate_features(const ExperimentConfig& cfg, const Pipeline& pipe, const Mat& x,
                                    std::uint64_t rep_key, const RunOptions& opt) {
  const long n = x.rows();
  const long frames = cfg.acquisition_frames();
  const SamplingMode mode = cfg.sampling_mode();
  const int p = pipe.detection.pixels();
  const bool restricted = cfg.n_lambda >= 0 && cfg.n_lambda < p;
  std::vector<int> keep;
  if (restricted) {
    int lo = static_cast<int>((p - cfg.n_lambda) / 2);
    keep = pixel_range(lo, lo + static_cast<int>(cfg.n_lambda));
  }
  std::string key_base = physics_key(cfg);
  if (!opt.cache_dir.empty()) std::filesystem::create_directories(opt.cache_dir);

  SimulatedFeatures out;
  out.features.resize(n);
  out.photon_totals.resize(n);
  parallel_for(n, opt.threads, [&](long i) {
    const std::uint64_t seed = derive_seed(cfg.seed, "frames", static_cast<std::uint64_t>(i), rep_key);
    std::string cache_path;
    if (!opt.cache_dir.empty()) {
      std::uint64_t h = fnv1a(key_base);
      h = fnv1a(x.row(i).eval().data(), sizeof(double) * static_cast<std::size_t>(x.cols()), h);
      h = fnv1a(&seed, sizeof seed, h);
      cache_path = (std::filesystem::path(opt.cache_dir) / (hex64(h) + ".qrcf")).string();
      if (std::filesystem::exists(cache_path)) {
        MomentEstimate est = read_estimate(cache_path);
        out.features[i] = estimate_features(est);
        out.photon_totals(i) = static_cast<double>(est.frames) * est.mu.sum();
        return;
      }
    }
    MomentEstimate est;
    try {
      PhaseMask mask = encode_features(x.row(i).transpose(), pipe.encoder);
      ReservoirRun run{pipe.budget.source, build_unitary(mask, pipe.reservoir), pipe.reservoir.eta};
      Acquisition acq = sample_frames(run, pipe.detection, frames, mode, seed);
      const std::uint64_t rseed = derive_seed(cfg.seed, "restrict", static_cast<std::uint64_t>(i), rep_key);
      if (acq.frames) {
        FrameSet fs = *acq.frames;
        if (restricted)
          fs = cfg.restrict_method == "erase" ? erase_pixels_poisson(fs, complement(keep, p), rseed)
                                              : restrict_wavelengths(fs, keep, rseed);
        ReservoirFeatures f = estimate_features(fs);
        est = MomentEstimate{f.mu, f.sigma(), frames, seed};
      } else {
        est = *acq.estimate;
        if (restricted)
          est = cfg.restrict_method == "erase" ? erase_pixels_poisson(est, complement(keep, p), rseed)
                                               : restrict_wavelengths(est, keep, rseed);
      }
    } catch (const std::exception& e) {
      throw StageError("simulate", i, e.what());
    }
    if (!cache_path.empty()) write_estimate(cache_path, est);
    out.features[i] = estimate_features(est);
    out.photon_totals(i) = static_cast<double>(est.frames) * est.mu.sum();
  });
  return out;
}

LinearModel train_classifier(const ExperimentConfig& cfg, const Mat& x, const IVec& labels, int rep, int threads) {
  switch (cfg.classifier) {
    case ModelKind::svm_ovo:
    case ModelKind::svm_ovr: {
      SvmOptions o;
      o.c = cfg.svm_c;
      o.tol = cfg.svm_tol;
      o.one_vs_rest = cfg.classifier == ModelKind::svm_ovr;
      o.threads = threads;
      return svm_train(x, labels, o);
    }
    case ModelKind::ridge: return ridge_train(x, labels, cfg.ridge_lambda);
    case ModelKind::pinv: return pinv_train(x, labels);
    case ModelKind::logistic: return logistic_train(x, labels, cfg.logistic);
    case ModelKind::sgd: {
      SgdOptions o = cfg.sgd;
      o.seed = derive_seed(cfg.seed, "sgd", 0, static_cast<std::uint64_t>(rep));
      return sgd_train(x, labels, o);
    }
  }
  throw std::logic_error("unhandled classifier");
}

namespace {

Mat rows_of(const Mat& x, const std::vector<int>& rows) {
  Mat out(static_cast<long>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<long>(i)) = x.row(rows[i]);
  return out;
}

IVec rows_of(const IVec& y, const std::vector<int>& rows) {
  IVec out(static_cast<long>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<long>(i)) = y(rows[i]);
  return out;
}

Split outer_split(const ExperimentConfig& cfg, const IVec& labels, int rep) {
  Dataset d;
  d.X = Mat::Zero(labels.size(), 1);
  d.labels = labels;
  SplitSpec s;
  s.train = cfg.train;
  s.validation = 0.0;
  s.test = cfg.test;
  s.seed = derive_seed(cfg.seed, "split", 0, static_cast<std::uint64_t>(rep));
  return split(d, s);
}

}  // namespace

RepetitionResult fit_and_score(const ExperimentConfig& cfg, const Mat& features, const IVec& labels, int rep,
                               bool select, int threads) {
  Split sp = outer_split(cfg, labels, rep);
  Mat xtr = rows_of(features, sp.train), xte = rows_of(features, sp.test);
  IVec ytr = rows_of(labels, sp.train), yte = rows_of(labels, sp.test);
  RepetitionResult res;
  res.rep = rep;
  res.feature_count = features.cols();
  const long kmin = *std::min_element(cfg.k_grid.begin(), cfg.k_grid.end());
  if (select && features.cols() > kmin && cfg.select_fraction > 0) {
    Dataset inner;
    inner.X = Mat::Zero(ytr.size(), 1);
    inner.labels = ytr;
    SplitSpec s;
    s.validation = cfg.select_fraction / cfg.train;
    s.train = 1.0 - s.validation;
    s.test = 0.0;
    s.seed = derive_seed(cfg.seed, "select", 0, static_cast<std::uint64_t>(rep));
    Split in = split(inner, s);
    Mat a = rows_of(xtr, in.train), v = rows_of(xtr, in.validation);
    auto [scaler, az] = standardize(a);
    Mat vz = scaler.transform(v);
    std::vector<int> grid;
    for (long k : cfg.k_grid) grid.push_back(static_cast<int>(std::min<long>(k, features.cols())));
    KScorer scorer = [&](const Mat& tr, const IVec& ty, const Mat& va, const IVec& vy) {
      return evaluate(train_classifier(cfg, tr, ty, rep, threads), va, vy).accuracy;
    };
    res.k = choose_k(az, rows_of(ytr, in.train), vz, rows_of(ytr, in.validation), grid, scorer);
    auto [full_scaler, xz] = standardize(xtr);
    res.selection = anova_select(xz, ytr, res.k);
    LinearModel m = train_classifier(cfg, apply_mask(xz, res.selection), ytr, rep, threads);
    res.metrics = evaluate(m, apply_mask(full_scaler.transform(xte), res.selection), yte);
  } else {
    auto [scaler, xz] = standardize(xtr);
    LinearModel m = train_classifier(cfg, xz, ytr, rep, threads);
    res.metrics = evaluate(m, scaler.transform(xte), yte);
  }
  res.accuracy = res.metrics.accuracy;
  return res;
}

namespace {

void summarize(RunReport& r) {
  const double n = static_cast<double>(r.reps.size());
  double s = 0.0;
  for (auto& rep : r.reps) s += rep.accuracy;
  r.mean = s / n;
  double v = 0.0;
  for (auto& rep : r.reps) v += (rep.accuracy - r.mean) * (rep.accuracy - r.mean);
  r.std = r.reps.size() > 1 ? std::sqrt(v / (n - 1)) : 0.0;
}

}  // namespace

std::vector<RunReport> run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  Dataset ds = load_task(cfg);
  const bool mnist = cfg.task == "mnist";
  std::optional<Pipeline> pipe;
  const int dims = mnist ? cfg.mnist_components : ds.dims();
  if (cfg.needs_reservoir()) pipe = make_pipeline(cfg, dims);

  std::vector<RunReport> reports(cfg.kinds.size());
  for (std::size_t k = 0; k < cfg.kinds.size(); ++k) {
    reports[k].config = cfg;
    reports[k].config.kinds = {cfg.kinds[k]};
    reports[k].kind = cfg.kinds[k];
    reports[k].config_hash = reports[k].config.hash();
    if (pipe && cfg.kinds[k] != "raw") {
      reports[k].frames = cfg.acquisition_frames();
      reports[k].input_photons = pipe->budget.input_photons;
      reports[k].expected_total = pipe->budget.expected_total * static_cast<double>(cfg.acquisition_frames()) /
                                  static_cast<double>(cfg.budget_frames);
    }
  }

  Mat x;
  SimulatedFeatures sim;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    if (mnist || rep == 0) {
      if (mnist) {
        Split sp = outer_split(cfg, ds.labels, rep);
        Pca fit;
        try {
          fit = pca(rows_of(ds.X, sp.train), cfg.mnist_components);
        } catch (const std::exception& e) {
          throw StageError("pca", -1, e.what());
        }
        Mat proj = fit.transform(ds.X);
        x = MinMaxScaler::fit(rows_of(proj, sp.train), cfg.feature_lo, cfg.feature_hi).transform(proj);
      } else {
        x = MinMaxScaler::fit(ds.X, cfg.feature_lo, cfg.feature_hi).transform(ds.X);
      }
      if (pipe) sim = simulate_features(cfg, *pipe, x, mnist ? static_cast<std::uint64_t>(rep) : 0, opt);
      if (rep == 0)
        for (auto& r : reports)
          if (r.kind != "raw") r.photon_totals = sim.photon_totals;
    }
    for (std::size_t k = 0; k < cfg.kinds.size(); ++k) {
      const std::string& kind = cfg.kinds[k];
      Mat f = kind == "raw" ? x : feature_matrix(sim.features, feature_kind_from_string(kind));
      try {
        reports[k].reps.push_back(fit_and_score(cfg, f, ds.labels, rep, cfg.select && kind == "covariance",
                                                opt.threads));
      } catch (const StageError&) {
        throw;
      } catch (const std::exception& e) {
        throw StageError("train", rep, e.what());
      }
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : reports) {
    summarize(r);
    r.wall_seconds = wall;
  }
  return reports;
}

ExperimentConfig with_axis_value(const ExperimentConfig& cfg, const std::string& axis, double value) {
  ExperimentConfig c = cfg;
  auto as_long = [&] {
    if (value != std::floor(value)) throw std::invalid_argument("sweep " + axis + ": value must be an integer");
    return static_cast<long>(value);
  };
  if (axis == "classes") {
    c.classes = static_cast<int>(as_long());
  } else if (axis == "frames") {
    c.frames = as_long();
  } else if (axis == "modes") {
    c.n_lambda = as_long();
  } else if (axis == "power") {
    c.power_scale = value;
  } else {
    throw std::invalid_argument("unknown sweep axis '" + axis + "' (expected classes, frames, modes, power)");
  }
  c.sweep_axis.clear();
  c.sweep_values.clear();
  c.validate();
  return c;
}

std::vector<std::vector<RunReport>> sweep(const ExperimentConfig& cfg, const std::string& axis,
                                          const std::vector<double>& values, const RunOptions& opt) {
  std::vector<std::vector<RunReport>> out;
  for (double v : values) out.push_back(run_experiment(with_axis_value(cfg, axis, v), opt));
  return out;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / n, mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return saa > 0 && sbb > 0 ? sab / std::sqrt(saa * sbb) : 0.0;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: need two equal-length samples");
  return pearson(ranks(x), ranks(y));
}

double spearman_pvalue(const std::vector<double>& x, const std::vector<double>& y, int permutations,
                       std::uint64_t seed) {
  const double observed = spearman(x, y);
  std::vector<double> rx = ranks(x), ry = ranks(y);
  Rng rng(seed);
  long hits = 0;
  for (int p = 0; p < permutations; ++p) {
    std::shuffle(ry.begin(), ry.end(), rng);
    if (pearson(rx, ry) >= observed - 1e-12) ++hits;
  }
  return (static_cast<double>(hits) + 1.0) / (permutations + 1.0);
}

std::vector<TrendSummary> sweep_trends(const std::string& axis, const std::vector<double>& values,
                                       const std::vector<std::vector<RunReport>>& reports) {
  std::vector<TrendSummary> out;
  if (reports.empty()) return out;
  for (std::size_t k = 0; k < reports[0].size(); ++k) {
    std::vector<double> xs, ys;
    for (std::size_t v = 0; v < values.size(); ++v)
      for (const auto& rep : reports[v][k].reps) {
        xs.push_back(values[v]);
        ys.push_back(rep.accuracy);
      }
    TrendSummary t;
    t.kind = reports[0][k].kind;
    if (xs.size() >= 2) {
      t.rho = spearman(xs, ys);
      t.p_value = spearman_pvalue(xs, ys, 10000, derive_seed(reports[0][k].config.seed, "trend:" + axis));
    }
    out.push_back(t);
  }
  return out;
}

std::string metrics_json(const RunReport& r) {
  const ExperimentConfig& c = r.config;
  Json j;
  j["version"] = kQrcVersion;
  j["config_hash"] = r.config_hash;
  j["task"] = c.task;
  j["source"] = to_string(c.source);
  j["feature_kind"] = r.kind;
  j["classifier"] = to_string(c.classifier);
  j["seed"] = c.seed;
  j["frames"] = r.frames;
  j["input_photons_per_frame"] = r.input_photons;
  j["expected_photons_per_sample"] = r.expected_total;
  if (r.photon_totals.size()) {
    j["photons_per_sample"] = {{"mean", r.photon_totals.mean()},
                               {"min", r.photon_totals.minCoeff()},
                               {"max", r.photon_totals.maxCoeff()}};
  }
  j["accuracy_mean"] = r.mean;
  j["accuracy_std"] = r.std;
  Json reps = Json::array();
  for (const auto& rep : r.reps) {
    Json pc = Json::array();
    for (long c2 = 0; c2 < rep.metrics.per_class.size(); ++c2) {
      double v = rep.metrics.per_class(c2);
      pc.push_back(std::isnan(v) ? Json(nullptr) : Json(v));
    }
    reps.push_back({{"rep", rep.rep}, {"accuracy", rep.accuracy}, {"selected_k", rep.k}, {"per_class", pc}});
  }
  j["repetitions"] = reps;
  return j.dump(2) + "\n";
}

namespace {

std::string stem(const RunReport& r) {
  return r.config.task + "_" + to_string(r.config.source) + "_" + r.kind + "_s" + std::to_string(r.config.seed);
}

std::string confusion_csv(const RunReport& r) {
  Eigen::MatrixXi total;
  for (const auto& rep : r.reps) {
    if (total.size() == 0) total = Eigen::MatrixXi::Zero(rep.metrics.confusion.rows(), rep.metrics.confusion.cols());
    total += rep.metrics.confusion;
  }
  std::ostringstream os;
  os << "true";
  for (long c = 0; c < total.cols(); ++c) os << ",pred_" << c;
  os << "\n";
  for (long i = 0; i < total.rows(); ++i) {
    os << i;
    for (long c = 0; c < total.cols(); ++c) os << "," << total(i, c);
    os << "\n";
  }
  return os.str();
}

}  // namespace

std::vector<std::string> emit_outputs(const std::vector<RunReport>& reports, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    std::string path = (std::filesystem::path(out_dir) / name).string();
    write_text(path, text);
    written.push_back(path);
  };
  for (const auto& r : reports) {
    std::string s = stem(r);
    put("metrics_" + s + ".json", metrics_json(r));
    put("confusion_" + s + ".csv", confusion_csv(r));
    put("config_" + s + ".ini", r.config.to_config().to_ini());
    if (r.photon_totals.size()) {
      std::ostringstream os;
      os << "sample,photons\n";
      for (long i = 0; i < r.photon_totals.size(); ++i) os << i << "," << format_double(r.photon_totals(i)) << "\n";
      put("photons_" + s + ".csv", os.str());
    }
    for (const auto& rep : r.reps)
      if (rep.k > 0)
        put("selection_" + s + "_rep" + std::to_string(rep.rep) + ".txt",
            selection_to_text(rep.selection, rep.feature_count));
    Json t;
    t["wall_seconds"] = r.wall_seconds;
    put("timing_" + s + ".json", t.dump(2) + "\n");
  }
  return written;
}

std::string sweep_csv(const std::string& axis, const std::vector<double>& values,
                      const std::vector<std::vector<RunReport>>& reports) {
  std::ostringstream os;
  os << axis << ",kind,mean,std,repetitions,accuracies\n";
  for (std::size_t v = 0; v < reports.size(); ++v)
    for (const auto& r : reports[v]) {
      std::vector<double> acc;
      for (const auto& rep : r.reps) acc.push_back(rep.accuracy);
      std::string list;
      for (std::size_t i = 0; i < acc.size(); ++i) list += (i ? ";" : "") + format_double(acc[i]);
      os << format_double(values[v]) << "," << r.kind << "," << format_double(r.mean) << "," << format_double(r.std)
         << "," << r.reps.size() << "," << list << "\n";
    }
  return os.str();
}

std::vector<std::string> emit_sweep(const std::string& axis, const std::vector<double>& values,
                                    const std::vector<std::vector<RunReport>>& reports, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (std::size_t v = 0; v < reports.size(); ++v) {
    auto sub = emit_outputs(reports[v], (std::filesystem::path(out_dir) / (axis + "_" + format_double(values[v]))).string());
    written.insert(written.end(), sub.begin(), sub.end());
  }
  std::string path = (std::filesystem::path(out_dir) / ("sweep_" + axis + ".csv")).string();
  write_text(path, sweep_csv(axis, values, reports));
  written.push_back(path);
  Json j;
  j["axis"] = axis;
  Json trends = Json::array();
  for (const auto& t : sweep_trends(axis, values, reports))
    trends.push_back({{"kind", t.kind}, {"spearman_rho", t.rho}, {"p_value", t.p_value}});
  j["trends"] = trends;
  path = (std::filesystem::path(out_dir) / ("trend_" + axis + ".json")).string();
  write_text(path, j.dump(2) + "\n");
  written.push_back(path);
  return written;
}

}  // namespace qrc
