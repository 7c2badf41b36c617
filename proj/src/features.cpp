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

#include "qrc/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

namespace qrc {

std::string to_string(FeatureKind k) {
  return k == FeatureKind::mean_field ? "mean_field" : "covariance";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "mean_field") return FeatureKind::mean_field;
  if (s == "covariance") return FeatureKind::covariance;
  throw std::invalid_argument("unknown feature kind '" + s + "' (expected mean_field, covariance)");
}

Mat ReservoirFeatures::sigma() const {
  const int p = pixels();
  Mat s(p, p);
  long t = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) {
      s(i, j) = upper(t);
      s(j, i) = upper(t);
      ++t;
    }
  return s;
}

Vec ReservoirFeatures::sigma_flat() const {
  Mat s = sigma();
  Vec out(s.size());
  for (int i = 0; i < s.rows(); ++i) out.segment(static_cast<long>(i) * s.cols(), s.cols()) = s.row(i).transpose();
  return out;
}

Vec ReservoirFeatures::vector(FeatureKind k) const {
  return k == FeatureKind::mean_field ? mu : sigma_flat();
}

ReservoirFeatures pack_features(const Vec& mu, const Mat& sigma) {
  const int p = static_cast<int>(mu.size());
  if (sigma.rows() != p || sigma.cols() != p) throw std::invalid_argument("pack_features: shape mismatch");
  ReservoirFeatures f;
  f.mu = mu;
  f.upper.resize(static_cast<long>(p) * (p + 1) / 2);
  long t = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) f.upper(t++) = 0.5 * (sigma(i, j) + sigma(j, i));
  return f;
}

ReservoirFeatures estimate_features(const FrameSet& fs) {
  const long n = fs.num_frames();
  if (n < 2) throw std::invalid_argument("estimate_features: at least 2 frames are required");
  Vec mu = fs.frames.colwise().mean().transpose();
  Mat centered = fs.frames.rowwise() - mu.transpose();
  Mat sigma = centered.transpose() * centered / static_cast<double>(n - 1);
  return pack_features(mu, sigma);
}

ReservoirFeatures estimate_features(const MomentEstimate& est) { return pack_features(est.mu, est.sigma); }

Mat feature_matrix(const std::vector<ReservoirFeatures>& feats, FeatureKind kind) {
  if (feats.empty()) return Mat();
  long d = feats[0].vector(kind).size();
  Mat x(static_cast<long>(feats.size()), d);
  for (std::size_t i = 0; i < feats.size(); ++i) x.row(static_cast<long>(i)) = feats[i].vector(kind).transpose();
  return x;
}

Vec anova_f(const Mat& x, const IVec& labels) {
  const long n = x.rows();
  if (labels.size() != n) throw std::invalid_argument("anova_f: label count mismatch");
  if (n == 0) throw std::invalid_argument("anova_f: empty matrix");
  const int classes = labels.maxCoeff() + 1;
  std::vector<long> count(classes, 0);
  for (long i = 0; i < n; ++i) ++count[labels(i)];
  int present = static_cast<int>(std::count_if(count.begin(), count.end(), [](long c) { return c > 0; }));
  if (present < 2) throw std::invalid_argument("anova_f: at least two classes are required");
  if (n <= present) throw std::invalid_argument("anova_f: need more samples than classes");

  Vec f(x.cols());
  for (long j = 0; j < x.cols(); ++j) {
    auto col = x.col(j);
    if (col.maxCoeff() == col.minCoeff()) {
      f(j) = 0.0;
      continue;
    }
    double grand = col.mean();
    std::vector<double> sum(classes, 0.0), lo(classes, std::numeric_limits<double>::infinity()),
        hi(classes, -std::numeric_limits<double>::infinity());
    for (long i = 0; i < n; ++i) {
      int c = labels(i);
      sum[c] += col(i);
      lo[c] = std::min(lo[c], col(i));
      hi[c] = std::max(hi[c], col(i));
    }
    bool within_constant = true;
    double ssb = 0.0, ssw = 0.0;
    for (int c = 0; c < classes; ++c) {
      if (count[c] == 0) continue;
      double m = sum[c] / count[c];
      ssb += count[c] * (m - grand) * (m - grand);
      if (lo[c] != hi[c]) within_constant = false;
    }
    if (within_constant) {
      f(j) = std::numeric_limits<double>::infinity();
      continue;
    }
    for (long i = 0; i < n; ++i) {
      double d = col(i) - sum[labels(i)] / count[labels(i)];
      ssw += d * d;
    }
    f(j) = (ssb / (present - 1)) / (ssw / (n - present));
  }
  return f;
}

SelectionMask anova_select(const Mat& x, const IVec& labels, int k) {
  if (k < 0 || k > x.cols()) throw std::invalid_argument("anova_select: k out of range");
  SelectionMask mask;
  mask.f_scores = anova_f(x, labels);
  std::vector<int> order(x.cols());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return mask.f_scores(a) > mask.f_scores(b); });
  mask.indices.assign(order.begin(), order.begin() + k);
  std::sort(mask.indices.begin(), mask.indices.end());
  mask.k = k;
  return mask;
}

Mat apply_mask(const Mat& x, const SelectionMask& mask) {
  Mat out(x.rows(), static_cast<long>(mask.indices.size()));
  for (std::size_t j = 0; j < mask.indices.size(); ++j) out.col(static_cast<long>(j)) = x.col(mask.indices[j]);
  return out;
}

int choose_k(const Mat& train, const IVec& train_labels, const Mat& val, const IVec& val_labels,
             std::vector<int> candidates, const KScorer& score) {
  if (candidates.empty()) throw std::invalid_argument("choose_k: empty candidate list");
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (candidates.size() == 1) return std::min<int>(candidates[0], static_cast<int>(train.cols()));
  Vec f = anova_f(train, train_labels);
  std::vector<int> order(train.cols());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f(a) > f(b); });
  int best = -1;
  double best_acc = -1.0;
  for (int k : candidates) {
    k = std::min<int>(k, static_cast<int>(train.cols()));
    SelectionMask m;
    m.indices.assign(order.begin(), order.begin() + k);
    std::sort(m.indices.begin(), m.indices.end());
    m.k = k;
    double acc = score(apply_mask(train, m), train_labels, apply_mask(val, m), val_labels);
    if (acc > best_acc) {
      best_acc = acc;
      best = k;
    }
  }
  return best;
}

Mat Scaler::transform(const Mat& x) const {
  if (x.cols() != mean.size()) throw std::invalid_argument("Scaler: column count mismatch");
  Mat out(x.rows(), x.cols());
  for (long j = 0; j < x.cols(); ++j) {
    if (scale(j) > 0)
      out.col(j) = (x.col(j).array() - mean(j)) / scale(j);
    else
      out.col(j).setZero();
  }
  return out;
}

std::pair<Scaler, Mat> standardize(const Mat& train) {
  if (train.rows() < 2) throw std::invalid_argument("standardize: at least 2 rows are required");
  Scaler s;
  s.mean = train.colwise().mean().transpose();
  s.scale.resize(train.cols());
  for (long j = 0; j < train.cols(); ++j) {
    auto col = train.col(j);
    if (col.maxCoeff() == col.minCoeff()) {
      s.scale(j) = 0.0;
      continue;
    }
    double var = (col.array() - s.mean(j)).square().mean();
    s.scale(j) = std::sqrt(var);
  }
  return {s, s.transform(train)};
}

Mat Pca::transform(const Mat& x) const { return (x.rowwise() - mean.transpose()) * components; }

Mat Pca::inverse_transform(const Mat& scores) const {
  return (scores * components.transpose()).rowwise() + mean.transpose();
}

Pca pca(const Mat& x, int n_components) {
  const long n = x.rows(), d = x.cols();
  if (n_components < 0 || n_components > std::min(n, d))
    throw std::invalid_argument("pca: n_components must be <= min(n, D)");
  Pca p;
  p.mean = x.colwise().mean().transpose();
  Mat c = x.rowwise() - p.mean.transpose();
  Eigen::BDCSVD<Mat> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Mat v = svd.matrixV().leftCols(n_components);
  // Deterministic sign: largest-magnitude loading of each component positive.
  for (int j = 0; j < n_components; ++j) {
    Eigen::Index imax;
    v.col(j).cwiseAbs().maxCoeff(&imax);
    if (v(imax, j) < 0) v.col(j) *= -1.0;
  }
  p.components = v;
  Vec sv = svd.singularValues();
  p.singular_values = sv.head(n_components);
  double total = sv.squaredNorm();
  p.explained_variance_ratio =
      total > 0 ? Vec(p.singular_values.array().square() / total) : Vec(Vec::Zero(n_components));
  p.projected = c * v;
  return p;
}

std::vector<SingularValueSummary> singular_value_report(
    const std::vector<std::pair<std::string, Mat>>& sources, int n_components, int bins) {
  std::vector<SingularValueSummary> out;
  double top = 0.0;
  for (const auto& [name, m] : sources) {
    SingularValueSummary s;
    s.source = name;
    Mat z = m.rows() >= 2 ? standardize(m).second : m;
    Eigen::BDCSVD<Mat> svd(z);
    Vec sv = svd.singularValues();
    if (sv.size() < n_components)
      throw std::invalid_argument("singular_value_report: matrix '" + name + "' has too few components");
    s.singular_values = sv.head(n_components);
    s.mean = n_components > 0 ? s.singular_values.mean() : 0.0;
    if (n_components > 0) top = std::max(top, s.singular_values.maxCoeff());
    out.push_back(std::move(s));
  }
  double width = top > 0 ? top / bins : 1.0;
  for (auto& s : out) {
    s.bin_edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) s.bin_edges[b] = b * width;
    s.counts.assign(bins, 0);
    for (long i = 0; i < s.singular_values.size(); ++i) {
      int b = std::min(bins - 1, static_cast<int>(s.singular_values(i) / width));
      ++s.counts[b];
    }
  }
  return out;
}

}  // namespace qrc
