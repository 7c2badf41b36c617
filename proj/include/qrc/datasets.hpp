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

// Benchmark datasets, stratified splits and photon-budget calibration.

#ifndef QRC_DATASETS_HPP_
#define QRC_DATASETS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qrc/features.hpp"
#include "qrc/frames.hpp"
#include "qrc/gaussian.hpp"

namespace qrc {

struct Dataset {
  Mat X;
  IVec labels;
  std::string name;
  std::vector<std::string> class_names;
  std::map<std::string, std::string> provenance;

  long size() const { return X.rows(); }
  int dims() const { return static_cast<int>(X.cols()); }
  int classes() const;
  std::vector<long> class_counts() const;
  void validate() const;  // no NaNs, labels in range, every class non-empty
};

// Interleaved half-circle arcs. Class c is the upper unit half-circle rotated
// by 2*pi*c/classes about (0.5, 0.25), sampled at equally spaced angles, plus
// isotropic Gaussian noise. classes = 2 reproduces the standard two-moons set.
Dataset make_moons_multiclass(long n, int classes, double noise, std::uint64_t seed);

// Isotropic Gaussian clusters with centers uniform in [-box, box]^2.
Dataset make_blobs(long n, int classes, double sigma, double box, std::uint64_t seed);

// Synthetic stand-in for the 7-vowel, 12-measurement formant table: per-class
// formant targets, speaker-group scaling (men, women, children) and token jitter.
Dataset make_vowels_synthetic(int per_class, std::uint64_t seed);

// CSV with a header row, 12 numeric columns and a trailing label column.
// Lines starting with '#' are comments. Labels may be integers or names.
Dataset load_vowels(const std::string& path);
Dataset parse_vowels(const std::string& text, const std::string& source_name);

// IDX files with magic 0x00000803 (images) and 0x00000801 (labels).
Mat read_idx_images(const std::string& path);  // n x rows*cols, values / 255
IVec read_idx_labels(const std::string& path);
void write_idx_images(const std::string& path, const Mat& images, int rows, int cols);
void write_idx_labels(const std::string& path, const IVec& labels);

// Seeded selection of per_class images of each digit in `digits`; labels are
// re-indexed to 0..digits.size()-1.
Dataset load_mnist(const std::string& images, const std::string& labels, int per_class,
                   const std::vector<int>& digits, std::uint64_t seed);

struct SplitSpec {
  double train = 0.9;
  double validation = 0.0;
  double test = 0.1;
  std::uint64_t seed = 1;
  bool stratify = true;
  void validate() const;
};

struct Split {
  std::vector<int> train;
  std::vector<int> validation;
  std::vector<int> test;
};

// Stratified shuffle split. Per-class sizes use largest-remainder rounding so
// the global sizes equal round(fraction * n).
Split split(const Dataset& ds, const SplitSpec& spec);

Dataset subset(const Dataset& ds, const std::vector<int>& rows);
Dataset select_classes(const Dataset& ds, const std::vector<int>& classes);

struct MnistPca {
  Dataset data;  // projected, n x components
  Pca pca;
  Split split;
};

// PCA fitted on the training rows of split(raw, spec) only.
MnistPca load_mnist_pca(const std::string& images, const std::string& labels, int per_class,
                        int components, std::uint64_t seed, const SplitSpec& spec);

// Spectral shape of each light source over the input modes.
struct SourceProfile {
  std::string squeezing = "equal";  // equal | decay
  double squeezing_decay = 0.7;     // ratio between neighbouring modes for decay
  double thermal_width = 0.2;       // Gaussian std as a fraction of M
  double supercontinuum_width = 0.2;
  double supercontinuum_g = 1.0;
  std::string coherent = "cw";      // cw | broadband
  double r_cap = 3.0;
};

// Source with `photons` mean input photons summed over all modes.
SourceSpec make_source(SourceKind kind, int modes, double photons, const SourceProfile& profile);

struct SourceBudget {
  SourceKind kind = SourceKind::squeezed;
  long frames = 0;
  double input_photons = 0.0;   // per frame, before any loss
  double expected_total = 0.0;  // detected photons per sample
  SourceSpec source;
};

struct BudgetCalibration {
  double target = 0.0;
  std::vector<SourceBudget> sources;
  double max_relative_spread() const;
};

// Chooses per-source input power so F * sum(detected mean) equals target;
// the expectation is evaluated with pixel_moments through an identity
// unitary. A squeezed source that needs r above profile.r_cap is an error.
BudgetCalibration calibrate_budget(const std::vector<SourceKind>& kinds, double target,
                                   const std::vector<long>& frames, int modes, const Vec& eta,
                                   const DetectionModel& det, const SourceProfile& profile);

// CSV export with '# key: value' metadata lines before the header.
std::string dataset_to_csv(const Dataset& ds);
void write_dataset_csv(const std::string& path, const Dataset& ds);

}  // namespace qrc

#endif  // QRC_DATASETS_HPP_
