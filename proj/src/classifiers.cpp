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

#include "qrc/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "qrc/parallel.hpp"
#include "qrc/rng.hpp"

namespace qrc {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::svm_ovo: return "svm_ovo";
    case ModelKind::svm_ovr: return "svm_ovr";
    case ModelKind::ridge: return "ridge";
    case ModelKind::logistic: return "logistic";
    case ModelKind::pinv: return "pinv";
    case ModelKind::sgd: return "sgd";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "svm" || s == "svm_ovo") return ModelKind::svm_ovo;
  if (s == "svm_ovr") return ModelKind::svm_ovr;
  if (s == "ridge") return ModelKind::ridge;
  if (s == "logistic") return ModelKind::logistic;
  if (s == "pinv") return ModelKind::pinv;
  if (s == "sgd") return ModelKind::sgd;
  throw std::invalid_argument("unknown classifier '" + s +
                              "' (expected svm_ovo, svm_ovr, ridge, logistic, pinv, sgd)");
}

Mat LinearModel::decision(const Mat& x) const {
  if (x.cols() != W.cols()) throw std::invalid_argument("model expects " + std::to_string(W.cols()) + " features");
  return (x * W.transpose()).rowwise() + b.transpose();
}

IVec LinearModel::predict(const Mat& x) const {
  Mat d = decision(x);
  IVec out(x.rows());
  for (long i = 0; i < x.rows(); ++i) {
    if (kind == ModelKind::svm_ovo) {
      std::vector<int> votes(classes, 0);
      std::vector<double> score(classes, 0.0);
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        double v = d(i, static_cast<long>(p));
        ++votes[v > 0 ? pairs[p].first : pairs[p].second];
        score[pairs[p].first] += v;
        score[pairs[p].second] -= v;
      }
      int best = 0;
      for (int c = 1; c < classes; ++c)
        if (votes[c] > votes[best] || (votes[c] == votes[best] && score[c] > score[best])) best = c;
      out(i) = best;
    } else {
      Eigen::Index j;
      d.row(i).maxCoeff(&j);
      out(i) = static_cast<int>(j);
    }
  }
  return out;
}

namespace {

int class_count(const IVec& labels) {
  if (labels.size() == 0) throw std::invalid_argument("empty label vector");
  if (labels.minCoeff() < 0) throw std::invalid_argument("labels must be non-negative");
  return labels.maxCoeff() + 1;
}

void require_two_classes(const IVec& labels) {
  int c = class_count(labels);
  std::vector<long> n(c, 0);
  for (long i = 0; i < labels.size(); ++i) ++n[labels(i)];
  if (std::count_if(n.begin(), n.end(), [](long v) { return v > 0; }) < 2)
    throw std::invalid_argument("training data contains a single class");
}

// min over b of C * sum_i max(0, -G_i - y_i b); evaluated at the candidate
// b and at every breakpoint.
double best_hinge(const Vec& g, const Vec& y, double c, double b_kkt) {
  auto hinge = [&](double b) {
    double s = 0.0;
    for (long i = 0; i < g.size(); ++i) s += std::max(0.0, -g(i) - y(i) * b);
    return c * s;
  };
  double best = hinge(b_kkt);
  for (long i = 0; i < g.size(); ++i) best = std::min(best, hinge(-y(i) * g(i)));
  return best;
}

// Primal-dual path following on the same dual, run when two-coordinate
// ascent exhausts its budget. Stops once complementarity is well below the
// duality-gap target; near-bound values are snapped to the bounds.
Vec interior_point_dual(const Mat& k, const Vec& y, double c, double tol) {
  const long n = y.size();
  const Mat q = y.asDiagonal() * k * y.asDiagonal();
  const Vec ones = Vec::Ones(n);
  Vec a = Vec::Constant(n, 0.5 * c), z = ones, w = ones;
  double nu = 0.0;
  const double scale = 1.0 + c * q.diagonal().maxCoeff();
  for (int it = 0; it < 300; ++it) {
    const Vec s = Vec::Constant(n, c) - a;
    const Vec rd = q * a - ones + nu * y - z + w;
    const double rp = y.dot(a);
    const double mu = (a.dot(z) + s.dot(w)) / (2.0 * static_cast<double>(n));
    const double dual = a.sum() - 0.5 * a.dot(q * a);
    if (rd.lpNorm<Eigen::Infinity>() <= 1e-12 * scale && std::abs(rp) <= 1e-12 * c &&
        2.0 * static_cast<double>(n) * mu <= 1e-3 * tol * (1.0 + std::abs(dual)))
      break;
    const double sm = 0.1 * mu;
    Mat h = q;
    h.diagonal() += (z.array() / a.array() + w.array() / s.array()).matrix();
    const Vec r = -rd + (sm / a.array() - z.array() - sm / s.array() + w.array()).matrix();
    Eigen::LLT<Mat> llt(h);
    const Vec u = llt.solve(r), v = llt.solve(y);
    const double dnu = (y.dot(u) + rp) / y.dot(v);
    const Vec da = u - dnu * v;
    const Vec dz = ((sm - a.array() * z.array() - z.array() * da.array()) / a.array()).matrix();
    const Vec dw = ((sm - s.array() * w.array() + w.array() * da.array()) / s.array()).matrix();
    double step = 1.0;
    for (long t = 0; t < n; ++t) {
      if (da(t) < 0) step = std::min(step, -a(t) / da(t));
      if (da(t) > 0) step = std::min(step, s(t) / da(t));
      if (dz(t) < 0) step = std::min(step, -z(t) / dz(t));
      if (dw(t) < 0) step = std::min(step, -w(t) / dw(t));
    }
    step = std::min(1.0, 0.99 * step);
    a += step * da;
    z += step * dz;
    w += step * dw;
    nu += step * dnu;
  }
  long widest = -1;
  for (long t = 0; t < n; ++t) {
    if (a(t) < 1e-10 * c) a(t) = 0.0;
    if (a(t) > c * (1.0 - 1e-10)) a(t) = c;
    if (widest < 0 || std::min(a(t), c - a(t)) > std::min(a(widest), c - a(widest))) widest = t;
  }
  // Restore sum(a_i y_i) = 0 after snapping, using the variable farthest from its bounds.
  a(widest) = std::clamp(a(widest) - y(widest) * y.dot(a), 0.0, c);
  return a;
}

}  // namespace

BinarySvmResult svm_binary(const Mat& x, const Vec& y, double c, double tol, long max_iter) {
  const long n = x.rows();
  if (y.size() != n) throw std::invalid_argument("svm_binary: label count mismatch");
  if (!(c > 0)) throw std::invalid_argument("svm_binary: C must be positive");
  if ((y.array() > 0).all() || (y.array() < 0).all())
    throw std::invalid_argument("svm_binary: training data contains a single class");
  const Mat k = x * x.transpose();
  const double tau = 1e-12;
  Vec alpha = Vec::Zero(n);
  Vec g = Vec::Constant(n, -1.0);  // gradient of alpha^T Q alpha / 2 - sum(alpha)
  auto up = [&](long t) { return y(t) > 0 ? alpha(t) < c : alpha(t) > 0; };
  auto low = [&](long t) { return y(t) > 0 ? alpha(t) > 0 : alpha(t) < c; };

  BinarySvmResult res;
  const long smo_budget = 10000 + 50 * n;
  double eps = 1e-3;
  long iter = 0;
  double gap = std::numeric_limits<double>::infinity();
  double b = 0.0;
  while (true) {
    // Working-set selection: maximal violating pair with second-order choice of j.
    double gmax = -std::numeric_limits<double>::infinity(), gmax2 = gmax;
    long i = -1, j = -1;
    for (long t = 0; t < n; ++t)
      if (up(t) && -y(t) * g(t) >= gmax) {
        gmax = -y(t) * g(t);
        i = t;
      }
    double obj_min = std::numeric_limits<double>::infinity();
    for (long t = 0; t < n; ++t) {
      if (!low(t)) continue;
      gmax2 = std::max(gmax2, y(t) * g(t));
      double bb = gmax + y(t) * g(t);
      if (i >= 0 && bb > 0) {
        double a = k(i, i) + k(t, t) - 2.0 * k(i, t);
        if (a <= 0) a = tau;
        if (-bb * bb / a <= obj_min) {
          obj_min = -bb * bb / a;
          j = t;
        }
      }
    }
    bool optimal_at_eps = i < 0 || j < 0 || gmax + gmax2 < eps;
    if (optimal_at_eps) {
      // Bias from free vectors, else the midpoint of the feasible interval.
      double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
      long nfree = 0;
      for (long t = 0; t < n; ++t) {
        double yg = y(t) * g(t);
        if (alpha(t) >= c) {
          if (y(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else if (alpha(t) <= 0) {
          if (y(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else {
          ++nfree;
          sum_free += yg;
        }
      }
      double rho = nfree > 0 ? sum_free / nfree : 0.5 * (ub + lb);
      b = -rho;
      double dual = alpha.sum() - 0.5 * alpha.dot(g + Vec::Ones(n));
      gap = alpha.dot(g) + best_hinge(g, y, c, b);
      res.dual_objective = dual;
      if (gap <= tol * (1.0 + std::abs(dual))) break;
      if (eps < 1e-15)
        throw ConvergenceError("svm_binary: gap stalled above tolerance", gap);
      eps *= 0.1;
      continue;
    }
    if (iter >= smo_budget && smo_budget < max_iter && !res.interior_point) {
      // Warm start: coordinate ascent resumes from the interior-point optimum
      // and makes the final gap check itself.
      alpha = interior_point_dual(k, y, c, tol);
      g = y.cwiseProduct(k * alpha.cwiseProduct(y)) - Vec::Ones(n);
      res.interior_point = true;
      continue;
    }
    if (++iter > max_iter) throw ConvergenceError("svm_binary: iteration cap reached", gap);

    double ai = alpha(i), aj = alpha(j);
    double qij = y(i) * y(j) * k(i, j);
    if (y(i) != y(j)) {
      double quad = k(i, i) + k(j, j) + 2.0 * qij;
      if (quad <= 0) quad = tau;
      double delta = (-g(i) - g(j)) / quad;
      double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0) {
        if (alpha(j) < 0) { alpha(j) = 0; alpha(i) = diff; }
      } else {
        if (alpha(i) < 0) { alpha(i) = 0; alpha(j) = -diff; }
      }
      if (diff > 0) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = c - diff; }
      } else {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = c + diff; }
      }
    } else {
      double quad = k(i, i) + k(j, j) - 2.0 * qij;
      if (quad <= 0) quad = tau;
      double delta = (g(i) - g(j)) / quad;
      double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > c) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = sum - c; }
      } else {
        if (alpha(j) < 0) { alpha(j) = 0; alpha(i) = sum; }
      }
      if (sum > c) {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = sum - c; }
      } else {
        if (alpha(i) < 0) { alpha(i) = 0; alpha(j) = sum; }
      }
    }
    double di = alpha(i) - ai, dj = alpha(j) - aj;
    for (long t = 0; t < n; ++t) g(t) += y(t) * (y(i) * k(i, t) * di + y(j) * k(j, t) * dj);
  }
  res.alpha = alpha;
  res.b = b;
  res.w = x.transpose() * alpha.cwiseProduct(y);
  res.gap = gap;
  res.iterations = iter;
  return res;
}

LinearModel svm_train(const Mat& x, const IVec& labels, const SvmOptions& opt) {
  if (labels.size() != x.rows()) throw std::invalid_argument("svm_train: label count mismatch");
  require_two_classes(labels);
  const int classes = class_count(labels);
  std::vector<std::vector<int>> rows(classes);
  for (long i = 0; i < labels.size(); ++i) rows[labels(i)].push_back(static_cast<int>(i));

  LinearModel m;
  m.kind = opt.one_vs_rest ? ModelKind::svm_ovr : ModelKind::svm_ovo;
  m.classes = classes;
  std::vector<std::vector<int>> members;
  std::vector<Vec> targets;
  if (opt.one_vs_rest) {
    for (int c = 0; c < classes; ++c) {
      m.pairs.push_back({c, -1});
      std::vector<int> all(labels.size());
      std::iota(all.begin(), all.end(), 0);
      Vec y(labels.size());
      for (long i = 0; i < labels.size(); ++i) y(i) = labels(i) == c ? 1.0 : -1.0;
      members.push_back(all);
      targets.push_back(y);
    }
  } else {
    for (int a = 0; a < classes; ++a)
      for (int b = a + 1; b < classes; ++b) {
        if (rows[a].empty() || rows[b].empty()) continue;
        m.pairs.push_back({a, b});
        std::vector<int> idx = rows[a];
        idx.insert(idx.end(), rows[b].begin(), rows[b].end());
        std::sort(idx.begin(), idx.end());
        Vec y(static_cast<long>(idx.size()));
        for (std::size_t t = 0; t < idx.size(); ++t) y(static_cast<long>(t)) = labels(idx[t]) == a ? 1.0 : -1.0;
        members.push_back(idx);
        targets.push_back(y);
      }
  }
  const long np = static_cast<long>(m.pairs.size());
  m.W.resize(np, x.cols());
  m.b.resize(np);
  m.duals.resize(np);
  parallel_for(np, opt.threads, [&](long p) {
    const auto& idx = members[p];
    Mat sub(static_cast<long>(idx.size()), x.cols());
    for (std::size_t t = 0; t < idx.size(); ++t) sub.row(static_cast<long>(t)) = x.row(idx[t]);
    BinarySvmResult r = svm_binary(sub, targets[p], opt.c, opt.tol, opt.max_iter);
    m.W.row(p) = r.w.transpose();
    m.b(p) = r.b;
    BinaryDual& d = m.duals[p];
    d.positive = m.pairs[p].first;
    d.negative = m.pairs[p].second;
    std::vector<double> coef;
    for (std::size_t t = 0; t < idx.size(); ++t)
      if (r.alpha(static_cast<long>(t)) > 0) {
        d.support.push_back(idx[t]);
        coef.push_back(r.alpha(static_cast<long>(t)) * targets[p](static_cast<long>(t)));
      }
    d.coef = Eigen::Map<Vec>(coef.data(), static_cast<long>(coef.size()));
  });
  return m;
}

namespace {

Mat one_hot(const IVec& labels, int classes) {
  Mat y = Mat::Zero(labels.size(), classes);
  for (long i = 0; i < labels.size(); ++i) y(i, labels(i)) = 1.0;
  return y;
}

LinearModel from_weights(ModelKind kind, int classes, const Mat& coef, const Vec& xmean,
                         const Vec& ymean) {
  LinearModel m;
  m.kind = kind;
  m.classes = classes;
  m.W = coef.transpose();
  m.b = ymean - m.W * xmean;
  return m;
}

}  // namespace

LinearModel pinv_train(const Mat& x, const IVec& labels, bool fit_intercept) {
  if (labels.size() != x.rows()) throw std::invalid_argument("pinv_train: label count mismatch");
  const int classes = class_count(labels);
  Mat y = one_hot(labels, classes);
  Vec xm = fit_intercept ? Vec(x.colwise().mean().transpose()) : Vec(Vec::Zero(x.cols()));
  Vec ym = fit_intercept ? Vec(y.colwise().mean().transpose()) : Vec(Vec::Zero(classes));
  Mat xc = x.rowwise() - xm.transpose();
  Mat yc = y.rowwise() - ym.transpose();
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(xc);
  return from_weights(ModelKind::pinv, classes, cod.solve(yc), xm, ym);
}

LinearModel ridge_train(const Mat& x, const IVec& labels, double lambda, bool fit_intercept) {
  if (labels.size() != x.rows()) throw std::invalid_argument("ridge_train: label count mismatch");
  if (lambda < 0) throw std::invalid_argument("ridge_train: lambda must be >= 0");
  if (lambda == 0) {
    LinearModel m = pinv_train(x, labels, fit_intercept);
    m.kind = ModelKind::ridge;
    return m;
  }
  const int classes = class_count(labels);
  Mat y = one_hot(labels, classes);
  Vec xm = fit_intercept ? Vec(x.colwise().mean().transpose()) : Vec(Vec::Zero(x.cols()));
  Vec ym = fit_intercept ? Vec(y.colwise().mean().transpose()) : Vec(Vec::Zero(classes));
  Mat xc = x.rowwise() - xm.transpose();
  Mat yc = y.rowwise() - ym.transpose();
  Mat coef;
  if (x.cols() <= x.rows()) {
    Mat a = xc.transpose() * xc;
    a.diagonal().array() += lambda;
    coef = a.llt().solve(xc.transpose() * yc);
  } else {
    Mat a = xc * xc.transpose();
    a.diagonal().array() += lambda;
    coef = xc.transpose() * a.llt().solve(yc);
  }
  return from_weights(ModelKind::ridge, classes, coef, xm, ym);
}

double logistic_loss(const Mat& w, const Vec& b, const Mat& x, const IVec& labels, double l2, Mat* grad_w,
                     Vec* grad_b) {
  const long n = x.rows();
  Mat z = (x * w.transpose()).rowwise() + b.transpose();
  double loss = 0.0;
  Mat p(n, w.rows());
  for (long i = 0; i < n; ++i) {
    double zmax = z.row(i).maxCoeff();
    Eigen::RowVectorXd e = (z.row(i).array() - zmax).exp();
    double s = e.sum();
    loss += zmax + std::log(s) - z(i, labels(i));
    p.row(i) = e / s;
    p(i, labels(i)) -= 1.0;
  }
  loss = loss / n + 0.5 * l2 * w.squaredNorm();
  if (grad_w) *grad_w = p.transpose() * x / static_cast<double>(n) + l2 * w;
  if (grad_b) *grad_b = p.colwise().sum().transpose() / static_cast<double>(n);
  return loss;
}

namespace {

struct LogisticProblem {
  const Mat* x;
  const IVec* labels;
  int classes;
  double l2;
};

void unpack(const gsl_vector* v, int classes, long d, Mat& w, Vec& b) {
  w.resize(classes, d);
  b.resize(classes);
  for (int c = 0; c < classes; ++c) {
    for (long j = 0; j < d; ++j) w(c, j) = gsl_vector_get(v, c * d + j);
    b(c) = gsl_vector_get(v, classes * d + c);
  }
}

void logistic_fdf(const gsl_vector* v, void* params, double* f, gsl_vector* g) {
  auto* pr = static_cast<LogisticProblem*>(params);
  const long d = pr->x->cols();
  Mat w, gw;
  Vec b, gb;
  unpack(v, pr->classes, d, w, b);
  double loss = logistic_loss(w, b, *pr->x, *pr->labels, pr->l2, g ? &gw : nullptr, g ? &gb : nullptr);
  if (f) *f = loss;
  if (g) {
    for (int c = 0; c < pr->classes; ++c) {
      for (long j = 0; j < d; ++j) gsl_vector_set(g, c * d + j, gw(c, j));
      gsl_vector_set(g, pr->classes * d + c, gb(c));
    }
  }
}

double logistic_f(const gsl_vector* v, void* params) {
  double f;
  logistic_fdf(v, params, &f, nullptr);
  return f;
}

void logistic_df(const gsl_vector* v, void* params, gsl_vector* g) { logistic_fdf(v, params, nullptr, g); }

}  // namespace

LinearModel logistic_train(const Mat& x, const IVec& labels, const LogisticOptions& opt) {
  if (labels.size() != x.rows()) throw std::invalid_argument("logistic_train: label count mismatch");
  require_two_classes(labels);
  const int classes = class_count(labels);
  const long d = x.cols();
  const std::size_t dim = static_cast<std::size_t>(classes * (d + 1));
  LogisticProblem prob{&x, &labels, classes, opt.l2};
  gsl_multimin_function_fdf fn;
  fn.n = dim;
  fn.f = logistic_f;
  fn.df = logistic_df;
  fn.fdf = logistic_fdf;
  fn.params = &prob;

  gsl_set_error_handler_off();
  gsl_vector* start = gsl_vector_calloc(dim);
  gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, dim);
  gsl_multimin_fdfminimizer_set(s, &fn, start, 0.1, 0.1);
  double gnorm = gsl_blas_dnrm2(s->gradient);
  int restarts = 0;
  for (long it = 0; it < opt.max_iter && gnorm > opt.grad_tol; ++it) {
    int status = gsl_multimin_fdfminimizer_iterate(s);
    gnorm = gsl_blas_dnrm2(s->gradient);
    if (status != GSL_SUCCESS) {
      if (gnorm <= opt.grad_tol || ++restarts > 50) break;
      gsl_vector_memcpy(start, s->x);
      gsl_multimin_fdfminimizer_set(s, &fn, start, 0.01, 0.1);
    }
  }
  Mat w;
  Vec b;
  unpack(s->x, classes, d, w, b);
  gsl_multimin_fdfminimizer_free(s);
  gsl_vector_free(start);
  if (gnorm > opt.grad_tol)
    throw ConvergenceError("logistic_train: gradient norm stayed above tolerance", gnorm);
  LinearModel m;
  m.kind = ModelKind::logistic;
  m.classes = classes;
  m.W = w;
  m.b = b;
  return m;
}

LinearModel sgd_train(const Mat& x, const IVec& labels, const SgdOptions& opt) {
  if (labels.size() != x.rows()) throw std::invalid_argument("sgd_train: label count mismatch");
  require_two_classes(labels);
  const int classes = class_count(labels);
  const long n = x.rows(), d = x.cols();
  Rng rng(opt.seed);
  Mat w = Mat::Zero(classes, d);
  Vec b = Vec::Zero(classes);
  Mat mw = Mat::Zero(classes, d), vw = Mat::Zero(classes, d);
  Vec mb = Vec::Zero(classes), vb = Vec::Zero(classes);
  std::vector<long> order(n);
  std::iota(order.begin(), order.end(), 0);
  long step = 0;
  const int batch = std::max(1, opt.batch);
  for (int e = 0; e < opt.epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    for (long start = 0; start < n; start += batch) {
      long len = std::min<long>(batch, n - start);
      Mat xb(len, d);
      IVec yb(len);
      for (long t = 0; t < len; ++t) {
        xb.row(t) = x.row(order[start + t]);
        yb(t) = labels(order[start + t]);
      }
      Mat gw;
      Vec gb;
      logistic_loss(w, b, xb, yb, opt.l2, &gw, &gb);
      ++step;
      mw = opt.beta1 * mw + (1 - opt.beta1) * gw;
      vw = opt.beta2 * vw + (1 - opt.beta2) * gw.cwiseAbs2();
      mb = opt.beta1 * mb + (1 - opt.beta1) * gb;
      vb = opt.beta2 * vb + (1 - opt.beta2) * gb.cwiseAbs2();
      double c1 = 1 - std::pow(opt.beta1, step), c2 = 1 - std::pow(opt.beta2, step);
      w.array() -= opt.lr * (mw.array() / c1) / ((vw.array() / c2).sqrt() + opt.eps);
      b.array() -= opt.lr * (mb.array() / c1) / ((vb.array() / c2).sqrt() + opt.eps);
    }
  }
  LinearModel m;
  m.kind = ModelKind::sgd;
  m.classes = classes;
  m.W = w;
  m.b = b;
  return m;
}

Metrics evaluate(const LinearModel& m, const Mat& x, const IVec& labels) {
  if (labels.size() != x.rows()) throw std::invalid_argument("evaluate: label count mismatch");
  int classes = std::max(m.classes, labels.size() ? labels.maxCoeff() + 1 : 0);
  IVec pred = m.predict(x);
  Metrics out;
  out.confusion = Eigen::MatrixXi::Zero(classes, classes);
  long correct = 0;
  for (long i = 0; i < labels.size(); ++i) {
    ++out.confusion(labels(i), pred(i));
    if (pred(i) == labels(i)) ++correct;
  }
  out.accuracy = labels.size() ? static_cast<double>(correct) / labels.size() : 0.0;
  out.per_class.resize(classes);
  for (int c = 0; c < classes; ++c) {
    long total = out.confusion.row(c).sum();
    out.per_class(c) = total ? static_cast<double>(out.confusion(c, c)) / total
                             : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace qrc
