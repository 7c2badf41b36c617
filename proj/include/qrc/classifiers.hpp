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

// Linear readout layers.

#ifndef QRC_CLASSIFIERS_HPP_
#define QRC_CLASSIFIERS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qrc/types.hpp"

namespace qrc {

enum class ModelKind { svm_ovo, svm_ovr, ridge, logistic, pinv, sgd };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

// Dual solution of one binary SVM.
struct BinaryDual {
  int positive = 0;           // class scored +1
  int negative = -1;          // class scored -1, -1 for "rest"
  std::vector<int> support;   // row indices into the training matrix
  Vec coef;                   // alpha_i * y_i for each support row
};

struct LinearModel {
  ModelKind kind = ModelKind::ridge;
  int classes = 0;
  Mat W;  // outputs x D
  Vec b;
  std::vector<std::pair<int, int>> pairs;  // svm_ovo: output row -> (positive, negative)
  std::vector<BinaryDual> duals;           // svm kinds

  Mat decision(const Mat& x) const;
  IVec predict(const Mat& x) const;
};

struct BinarySvmResult {
  Vec alpha;
  double b = 0.0;
  Vec w;
  double dual_objective = 0.0;  // sum(alpha) - alpha^T Q alpha / 2
  double gap = 0.0;
  long iterations = 0;
  bool interior_point = false;  // warm-started by the interior-point solve
};

// Soft-margin dual with a linear kernel, y in {-1, +1}. Two-coordinate
// ascent that keeps sum(alpha_i y_i) = 0; stops when the duality gap is at
// most tol * (1 + |dual objective|). Past 10000 + 50 n steps (when below
// max_iter) a primal-dual interior-point solve of the same dual warm-starts
// the remaining coordinate steps.
BinarySvmResult svm_binary(const Mat& x, const Vec& y, double c, double tol = 1e-8,
                           long max_iter = 10000000);

struct SvmOptions {
  double c = 1.0;
  double tol = 1e-8;
  long max_iter = 10000000;
  bool one_vs_rest = false;
  int threads = 1;
};

LinearModel svm_train(const Mat& x, const IVec& labels, const SvmOptions& opt = {});

// Closed form on one-hot targets. lambda == 0 falls back to the pseudoinverse.
LinearModel ridge_train(const Mat& x, const IVec& labels, double lambda, bool fit_intercept = true);
LinearModel pinv_train(const Mat& x, const IVec& labels, bool fit_intercept = true);

struct LogisticOptions {
  double l2 = 1e-2;
  double grad_tol = 1e-5;
  long max_iter = 20000;
};

// Mean multinomial cross-entropy plus l2/2 ||W||^2 and its gradient with
// respect to (W row-major, b).
double logistic_loss(const Mat& w, const Vec& b, const Mat& x, const IVec& labels, double l2,
                     Mat* grad_w = nullptr, Vec* grad_b = nullptr);
LinearModel logistic_train(const Mat& x, const IVec& labels, const LogisticOptions& opt = {});

struct SgdOptions {
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int epochs = 100;
  int batch = 32;
  double l2 = 0.0;
  std::uint64_t seed = 1;
};

LinearModel sgd_train(const Mat& x, const IVec& labels, const SgdOptions& opt = {});

struct Metrics {
  double accuracy = 0.0;
  Vec per_class;               // NaN for classes absent from the labels
  Eigen::MatrixXi confusion;   // rows: true class, columns: predicted
};

Metrics evaluate(const LinearModel& m, const Mat& x, const IVec& labels);

}  // namespace qrc

#endif  // QRC_CLASSIFIERS_HPP_
