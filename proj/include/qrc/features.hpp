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

// Classifier inputs from acquisitions: mean-field and covariance vectors,
// scaling, ANOVA selection, PCA.

#ifndef QRC_FEATURES_HPP_
#define QRC_FEATURES_HPP_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qrc/frames.hpp"

namespace qrc {

enum class FeatureKind { mean_field, covariance };

std::string to_string(FeatureKind k);
FeatureKind feature_kind_from_string(const std::string& s);

struct ReservoirFeatures {
  Vec mu;
  Vec upper;  // packed upper triangle of Sigma_hat, row by row
  FeatureKind kind = FeatureKind::covariance;

  int pixels() const { return static_cast<int>(mu.size()); }
  Mat sigma() const;
  // Row-major P^2 flattening of Sigma_hat.
  Vec sigma_flat() const;
  Vec vector(FeatureKind k) const;
};

ReservoirFeatures pack_features(const Vec& mu, const Mat& sigma);
// Sample mean and unbiased (F - 1) covariance over frames.
ReservoirFeatures estimate_features(const FrameSet& fs);
ReservoirFeatures estimate_features(const MomentEstimate& est);

Mat feature_matrix(const std::vector<ReservoirFeatures>& feats, FeatureKind kind);

struct SelectionMask {
  std::vector<int> indices;  // sorted
  int k = 0;
  Vec f_scores;
};

// One-way ANOVA F per column. Zero within-class variance gives +inf unless
// the column is constant, which gives 0.
Vec anova_f(const Mat& x, const IVec& labels);
SelectionMask anova_select(const Mat& x, const IVec& labels, int k);
Mat apply_mask(const Mat& x, const SelectionMask& mask);

// Score returns validation accuracy for a candidate training/validation pair.
using KScorer = std::function<double(const Mat& train, const IVec& train_labels, const Mat& val,
                                     const IVec& val_labels)>;
// Best candidate k on the validation set; ties go to the smaller k.
int choose_k(const Mat& train, const IVec& train_labels, const Mat& val, const IVec& val_labels,
             std::vector<int> candidates, const KScorer& score);

struct Scaler {
  Vec mean;
  Vec scale;  // 0 for constant columns

  Mat transform(const Mat& x) const;
};

std::pair<Scaler, Mat> standardize(const Mat& train);

struct Pca {
  Vec mean;
  Mat components;  // D x k, orthonormal columns
  Vec singular_values;
  Vec explained_variance_ratio;
  Mat projected;   // n x k scores of the fitted data

  Mat transform(const Mat& x) const;
  Mat inverse_transform(const Mat& scores) const;
};

Pca pca(const Mat& x, int n_components);

struct SingularValueSummary {
  std::string source;
  Vec singular_values;
  double mean = 0.0;
  std::vector<double> bin_edges;
  std::vector<int> counts;
};

// Per source: singular values of the standardized feature matrix (same
// component count for all), their mean, and a shared-edge histogram.
std::vector<SingularValueSummary> singular_value_report(
    const std::vector<std::pair<std::string, Mat>>& sources, int n_components, int bins);

}  // namespace qrc

#endif  // QRC_FEATURES_HPP_
