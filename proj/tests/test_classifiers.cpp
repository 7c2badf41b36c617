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

#include <cmath>
#include <random>

#include "catch_amalgamated.hpp"
#include "qp_oracle.hpp"
#include "qrc/classifiers.hpp"
#include "qrc/datasets.hpp"
#include "qrc/rng.hpp"

using namespace qrc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Two Gaussian clouds in `d` dimensions, centers `sep` apart along axis 0.
std::pair<Mat, Vec> two_clouds(int n, int d, double sep, Rng& rng) {
  std::normal_distribution<double> nd;
  Mat x(n, d);
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    y(i) = i % 2 == 0 ? 1.0 : -1.0;
    for (int j = 0; j < d; ++j) x(i, j) = nd(rng);
    x(i, 0) += 0.5 * sep * y(i);
  }
  return {x, y};
}

IVec to_labels(const Vec& y) {
  IVec l(y.size());
  for (long i = 0; i < y.size(); ++i) l(i) = y(i) > 0 ? 1 : 0;
  return l;
}

Mat gaussian_matrix(int n, int d, Rng& rng) {
  std::normal_distribution<double> nd;
  Mat m(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = nd(rng);
  return m;
}

}  // namespace

TEST_CASE("symmetric two-point SVM", "[classifiers]") {
  Mat x(2, 1);
  x << -1, 1;
  Vec y(2);
  y << 1, -1;
  auto r = svm_binary(x, y, 1.0);
  CHECK_THAT(r.b, WithinAbs(0.0, 1e-9));
  CHECK_THAT(r.w(0), WithinAbs(-1.0, 1e-6));
  CHECK(r.alpha(0) > 0);
  CHECK(r.alpha(1) > 0);
  CHECK_THAT(r.alpha(0), WithinAbs(0.5, 1e-6));
}

TEST_CASE("separable 20-point SVM matches the QP oracle", "[classifiers]") {
  Rng rng(1);
  auto [x, y] = two_clouds(20, 2, 6.0, rng);
  const double c = 100.0;
  auto r = svm_binary(x, y, c);
  auto q = testing::qp_svm(x, y, c);
  Vec fr = (x * r.w).array() + r.b;
  Vec fq = (x * q.w).array() + q.b;
  CHECK((fr - fq).cwiseAbs().maxCoeff() <= 1e-4);
  CHECK((fr.array() * y.array() > 0).all());
  CHECK_THAT(r.dual_objective, WithinRel(q.dual_objective, 1e-6));
}

TEST_CASE("soft-margin SVM matches the QP oracle on overlapping data", "[classifiers][property]") {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    auto [x, y] = two_clouds(40, 5, 1.5, rng);
    for (double c : {0.1, 1.0, 10.0}) {
      auto r = svm_binary(x, y, c);
      auto q = testing::qp_svm(x, y, c);
      Vec fr = (x * r.w).array() + r.b;
      Vec fq = (x * q.w).array() + q.b;
      CHECK((fr - fq).cwiseAbs().maxCoeff() <= 1e-4);
      CHECK(r.gap <= 1e-8 * (1.0 + std::abs(r.dual_objective)));
    }
  }
}

TEST_CASE("interior-point warm start on an ill-conditioned dual", "[classifiers]") {
  // Nearly collinear columns and a large C keep coordinate ascent past its
  // step budget.
  Rng rng(5);
  std::normal_distribution<double> nd;
  const int n = 200, d = 20;
  Mat x(n, d);
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = nd(rng);
    y(i) = x(i, 0) + 0.5 * x(i, 1) + 0.7 * nd(rng) > 0 ? 1.0 : -1.0;
  }
  Mat mix = Mat::Identity(d, d);
  for (int j = 1; j < d; ++j) mix(j - 1, j) = 0.99;
  x = x * mix;
  for (double c : {1.0, 100.0}) {
    auto r = svm_binary(x, y, c);
    auto q = testing::qp_svm(x, y, c);
    CHECK(r.interior_point == (c == 100.0));
    Vec fr = (x * r.w).array() + r.b;
    Vec fq = (x * q.w).array() + q.b;
    CHECK((fr - fq).cwiseAbs().maxCoeff() <= 1e-5);
    CHECK(r.gap <= 1e-8 * (1.0 + std::abs(r.dual_objective)));
    CHECK(std::abs(r.alpha.dot(y)) <= 1e-9);
    CHECK(r.alpha.minCoeff() >= 0.0);
    CHECK(r.alpha.maxCoeff() <= c);
  }
}

TEST_CASE("SVM dual feasibility and the support-vector identity", "[classifiers][property]") {
  Rng rng(3);
  auto [x, y] = two_clouds(60, 4, 1.0, rng);
  const double c = 0.7;
  auto r = svm_binary(x, y, c);
  CHECK((r.alpha.array() >= 0).all());
  CHECK((r.alpha.array() <= c).all());
  CHECK(std::abs(r.alpha.dot(y)) <= 1e-8);
  Vec w = Vec::Zero(4);
  for (long i = 0; i < x.rows(); ++i)
    if (r.alpha(i) > 0) w += r.alpha(i) * y(i) * x.row(i).transpose();
  CHECK((w - r.w).cwiseAbs().maxCoeff() <= 1e-10);

  IVec labels(90);
  Mat x3 = gaussian_matrix(90, 4, rng);
  for (int i = 0; i < 90; ++i) {
    labels(i) = i % 3;
    x3(i, labels(i)) += 2.0;
  }
  auto m = svm_train(x3, labels, {c});
  REQUIRE(m.duals.size() == 3);
  REQUIRE(m.pairs.size() == 3);
  for (std::size_t p = 0; p < m.duals.size(); ++p) {
    const auto& d = m.duals[p];
    Vec wp = Vec::Zero(4);
    double balance = 0.0;
    for (std::size_t s = 0; s < d.support.size(); ++s) {
      wp += d.coef(static_cast<long>(s)) * x3.row(d.support[s]).transpose();
      balance += d.coef(static_cast<long>(s));
      CHECK(std::abs(d.coef(static_cast<long>(s))) <= c + 1e-12);
    }
    CHECK((wp - m.W.row(static_cast<long>(p)).transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(std::abs(balance) <= 1e-8);
  }
}

TEST_CASE("one-vs-one and one-vs-rest shapes", "[classifiers]") {
  Rng rng(4);
  const int classes = 5;
  IVec labels(100);
  Mat x = gaussian_matrix(100, 6, rng);
  for (int i = 0; i < 100; ++i) {
    labels(i) = i % classes;
    x(i, labels(i)) += 3.0;
  }
  auto ovo = svm_train(x, labels);
  CHECK(ovo.W.rows() == classes * (classes - 1) / 2);
  CHECK(ovo.kind == ModelKind::svm_ovo);
  SvmOptions o;
  o.one_vs_rest = true;
  auto ovr = svm_train(x, labels, o);
  CHECK(ovr.W.rows() == classes);
  CHECK(evaluate(ovo, x, labels).accuracy > 0.9);
  CHECK(evaluate(ovr, x, labels).accuracy > 0.9);
}

TEST_CASE("SVM training is thread-count independent", "[classifiers][property]") {
  Rng rng(5);
  IVec labels(80);
  Mat x = gaussian_matrix(80, 5, rng);
  for (int i = 0; i < 80; ++i) {
    labels(i) = i % 4;
    x(i, labels(i)) += 1.0;
  }
  SvmOptions a, b;
  b.threads = 4;
  auto m1 = svm_train(x, labels, a), m2 = svm_train(x, labels, b);
  CHECK(m1.W == m2.W);
  CHECK(m1.b == m2.b);
}

TEST_CASE("SVM errors", "[classifiers]") {
  Mat x(3, 1);
  x << 0, 1, 2;
  CHECK_THROWS_AS(svm_train(x, IVec::Zero(3)), std::invalid_argument);
  Rng rng(6);
  auto [xx, y] = two_clouds(40, 3, 0.5, rng);
  CHECK_THROWS_AS(svm_binary(xx, y, 1.0, 1e-6, 3), ConvergenceError);
  try {
    svm_binary(xx, y, 1.0, 1e-6, 3);
  } catch (const ConvergenceError& e) {
    CHECK(e.gap() > 0);
  }
  CHECK_THROWS_AS(svm_binary(xx, y, -1.0), std::invalid_argument);
}

TEST_CASE("raw moons are not linearly separable", "[classifiers]") {
  Dataset d = make_moons_multiclass(600, 4, 0.1, 1);
  auto sp = split(d, SplitSpec{});
  Dataset tr = subset(d, sp.train), te = subset(d, sp.test);
  auto m = svm_train(tr.X, tr.labels);
  double acc = evaluate(m, te.X, te.labels).accuracy;
  CHECK(acc < 0.85);
  CHECK(acc > 0.25);
}

TEST_CASE("ridge on orthonormal columns reduces to X^T T", "[classifiers]") {
  Rng rng(7);
  Mat a = gaussian_matrix(12, 4, rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat x = qr.householderQ() * Mat::Identity(12, 4);
  IVec labels(12);
  for (int i = 0; i < 12; ++i) labels(i) = i % 3;
  Mat t = Mat::Zero(12, 3);
  for (int i = 0; i < 12; ++i) t(i, labels(i)) = 1.0;
  auto m = ridge_train(x, labels, 1e-12, false);
  CHECK((m.W - (x.transpose() * t).transpose()).cwiseAbs().maxCoeff() < 1e-9);
  auto p = pinv_train(x, labels, false);
  CHECK((p.W - m.W).cwiseAbs().maxCoeff() < 1e-9);
  auto z = ridge_train(x, labels, 0.0, false);
  CHECK((z.W - p.W).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(ridge_train(x, labels, -1.0), std::invalid_argument);
}

TEST_CASE("ridge primal and dual paths agree", "[classifiers]") {
  Rng rng(8);
  IVec labels(10);
  for (int i = 0; i < 10; ++i) labels(i) = i % 2;
  Mat wide = gaussian_matrix(10, 30, rng);
  Mat tall = gaussian_matrix(40, 3, rng);
  IVec lt(40);
  for (int i = 0; i < 40; ++i) lt(i) = i % 2;
  for (const auto& [x, y] : {std::pair{wide, labels}, std::pair{tall, lt}}) {
    auto m = ridge_train(x, y, 0.5);
    // Direct normal equations on centered data.
    Vec mean = x.colwise().mean().transpose();
    Mat xc = x.rowwise() - mean.transpose();
    Mat t = Mat::Zero(x.rows(), 2);
    for (long i = 0; i < x.rows(); ++i) t(i, y(i)) = 1.0;
    Vec tm = t.colwise().mean().transpose();
    Mat tc = t.rowwise() - tm.transpose();
    Mat g = xc.transpose() * xc + 0.5 * Mat::Identity(x.cols(), x.cols());
    Mat w = g.ldlt().solve(xc.transpose() * tc).transpose();
    CHECK((m.W - w).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((m.b - (tm - w * mean)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("ridge training accuracy is non-increasing in lambda", "[classifiers][property]") {
  Rng rng(9);
  IVec labels(60);
  Mat x = gaussian_matrix(60, 8, rng);
  for (int i = 0; i < 60; ++i) {
    labels(i) = i % 3;
    x(i, labels(i)) += 6.0;
  }
  double prev = 2.0;
  for (double lam : {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1e3}) {
    double acc = evaluate(ridge_train(x, labels, lam), x, labels).accuracy;
    CHECK(acc <= prev);
    prev = acc;
  }
  CHECK(evaluate(ridge_train(x, labels, 1e-3), x, labels).accuracy == 1.0);
}

TEST_CASE("logistic gradient matches central differences", "[classifiers][property]") {
  Rng rng(10);
  IVec labels(30);
  for (int i = 0; i < 30; ++i) labels(i) = i % 3;
  Mat x = gaussian_matrix(30, 4, rng);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    Mat w = gaussian_matrix(3, 4, rng);
    Vec b = normal_vector(3, rng);
    Mat gw;
    Vec gb;
    logistic_loss(w, b, x, labels, 0.1, &gw, &gb);
    const double h = 1e-5;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 4; ++j) {
        Mat wp = w, wm = w;
        wp(i, j) += h;
        wm(i, j) -= h;
        double fd = (logistic_loss(wp, b, x, labels, 0.1) - logistic_loss(wm, b, x, labels, 0.1)) / (2 * h);
        worst = std::max(worst, std::abs(fd - gw(i, j)) / std::max(std::abs(gw(i, j)), 1e-3));
      }
      Vec bp = b, bm = b;
      bp(i) += h;
      bm(i) -= h;
      double fd = (logistic_loss(w, bp, x, labels, 0.1) - logistic_loss(w, bm, x, labels, 0.1)) / (2 * h);
      worst = std::max(worst, std::abs(fd - gb(i)) / std::max(std::abs(gb(i)), 1e-3));
    }
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("logistic regression fits a separable pair", "[classifiers]") {
  Mat x(2, 1);
  x << -1, 1;
  IVec labels(2);
  labels << 0, 1;
  LogisticOptions o;
  o.l2 = 0.0;
  auto m = logistic_train(x, labels, o);
  CHECK(logistic_loss(m.W, m.b, x, labels, 0.0) <= 1e-3);
  CHECK(evaluate(m, x, labels).accuracy == 1.0);
}

TEST_CASE("logistic regression reaches the gradient tolerance", "[classifiers]") {
  Rng rng(11);
  IVec labels(90);
  Mat x = gaussian_matrix(90, 5, rng);
  for (int i = 0; i < 90; ++i) {
    labels(i) = i % 3;
    x(i, labels(i)) += 2.0;
  }
  auto m = logistic_train(x, labels);
  Mat gw;
  Vec gb;
  logistic_loss(m.W, m.b, x, labels, LogisticOptions{}.l2, &gw, &gb);
  CHECK(std::sqrt(gw.squaredNorm() + gb.squaredNorm()) <= 1e-5);
  CHECK(evaluate(m, x, labels).accuracy > 0.7);
}

TEST_CASE("sgd is seeded and learns separable data", "[classifiers]") {
  Rng rng(12);
  IVec labels(90);
  Mat x = gaussian_matrix(90, 4, rng);
  for (int i = 0; i < 90; ++i) {
    labels(i) = i % 3;
    x(i, labels(i)) += 4.0;
  }
  SgdOptions o;
  auto a = sgd_train(x, labels, o), b = sgd_train(x, labels, o);
  CHECK(a.W == b.W);
  o.seed = 2;
  auto c = sgd_train(x, labels, o);
  CHECK(a.W != c.W);
  CHECK(evaluate(a, x, labels).accuracy > 0.95);
}

TEST_CASE("predictions are invariant to positive rescaling", "[classifiers][property]") {
  Rng rng(13);
  IVec labels(60);
  Mat x = gaussian_matrix(60, 4, rng);
  for (int i = 0; i < 60; ++i) {
    labels(i) = i % 4;
    x(i, labels(i)) += 0.8;
  }
  for (LinearModel m : {svm_train(x, labels), ridge_train(x, labels, 1.0)}) {
    IVec before = m.predict(x);
    for (double s : {1e-3, 0.5, 7.0, 1e4}) {
      LinearModel scaled = m;
      scaled.W *= s;
      scaled.b *= s;
      CHECK(scaled.predict(x) == before);
    }
  }
}

TEST_CASE("one-vs-one ties go to the summed decision value, then the lower class", "[classifiers]") {
  LinearModel m;
  m.kind = ModelKind::svm_ovo;
  m.classes = 3;
  m.pairs = {{0, 1}, {0, 2}, {1, 2}};
  m.W = Mat::Zero(3, 1);
  m.b.resize(3);
  // 0 beats 1, 2 beats 0, 1 beats 2: one vote each.
  m.b << 0.5, -2.0, 0.5;
  Mat x = Mat::Zero(1, 1);
  // Summed values: class 0: 0.5 - (-2.0)... 0: +0.5 - 2.0 = -1.5, 1: -0.5 + 0.5 = 0, 2: +2.0 - 0.5 = 1.5.
  CHECK(m.predict(x)(0) == 2);
  m.b << 1.0, -1.0, 1.0;
  // Sums: 0: 0, 1: 0, 2: 0. Lowest index wins.
  CHECK(m.predict(x)(0) == 0);
}

TEST_CASE("evaluate", "[classifiers]") {
  LinearModel id;
  id.kind = ModelKind::ridge;
  id.classes = 3;
  id.W = Mat::Identity(3, 3);
  id.b = Vec::Zero(3);
  Mat x = Mat::Identity(3, 3);
  IVec labels(3);
  labels << 0, 1, 2;
  auto perfect = evaluate(id, x, labels);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.confusion == Eigen::MatrixXi::Identity(3, 3));

  Rng rng(14);
  const int n = 3000, classes = 4;
  LinearModel rnd;
  rnd.kind = ModelKind::ridge;
  rnd.classes = classes;
  rnd.W = Mat::Identity(classes, classes);
  rnd.b = Vec::Zero(classes);
  Mat xr = gaussian_matrix(n, classes, rng);
  IVec yr(n);
  std::uniform_int_distribution<int> pick(0, classes - 1);
  for (int i = 0; i < n; ++i) yr(i) = pick(rng);
  double acc = evaluate(rnd, xr, yr).accuracy;
  CHECK(std::abs(acc - 0.25) < 4.0 * std::sqrt(0.25 * 0.75 / n));

  IVec partial(3);
  partial << 0, 0, 2;
  auto m = evaluate(id, x, partial);
  CHECK(std::isnan(m.per_class(1)));
  CHECK(m.per_class(0) == 0.5);
  CHECK(m.confusion.sum() == 3);
}

TEST_CASE("model kind names", "[classifiers]") {
  for (ModelKind k : {ModelKind::svm_ovo, ModelKind::svm_ovr, ModelKind::ridge, ModelKind::logistic,
                      ModelKind::pinv, ModelKind::sgd})
    CHECK(model_kind_from_string(to_string(k)) == k);
  CHECK(model_kind_from_string("svm") == ModelKind::svm_ovo);
  CHECK_THROWS_AS(model_kind_from_string("mlp"), std::invalid_argument);
}
