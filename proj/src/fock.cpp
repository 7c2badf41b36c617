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

#include "qrc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace qrc {

namespace {

// Fock states of `modes` modes with total photon number <= cutoff, in
// lexicographic order of (n_0, n_1, ...). Ranks follow from the
// hockey-stick identity, so no lookup table is needed.
class SimplexBasis {
 public:
  SimplexBasis(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
    int n = cutoff + modes + 2;
    binom_.assign(static_cast<std::size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a) {
      at(a, 0) = 1;
      for (int b = 1; b <= a; ++b) at(a, b) = at(a - 1, b - 1) + (b <= a - 1 ? at(a - 1, b) : 0);
    }
    dim_ = count(modes, cutoff);
    occ_.resize(static_cast<std::size_t>(dim_) * modes);
    std::vector<int> cur(modes, 0);
    long idx = 0;
    enumerate(0, cutoff, cur, idx);
  }

  long dim() const { return dim_; }
  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  const int* occ(long i) const { return &occ_[static_cast<std::size_t>(i) * modes_]; }

  long rank(const int* n) const {
    long r = 0;
    int budget = cutoff_;
    for (int i = 0; i < modes_; ++i) {
      int k = modes_ - i - 1;
      // sum_{v < n_i} C(budget - v + k, k)
      r += binom(budget + k + 1, k + 1) - binom(budget - n[i] + k + 1, k + 1);
      budget -= n[i];
    }
    return r;
  }

 private:
  std::int64_t& at(int a, int b) { return binom_[static_cast<std::size_t>(a) * (cutoff_ + modes_ + 2) + b]; }
  std::int64_t binom(int a, int b) const {
    if (b < 0 || a < 0 || b > a) return 0;
    return binom_[static_cast<std::size_t>(a) * (cutoff_ + modes_ + 2) + b];
  }
  long count(int k, int s) const { return static_cast<long>(binom(s + k, k)); }

  void enumerate(int mode, int budget, std::vector<int>& cur, long& idx) {
    if (mode == modes_) {
      std::copy(cur.begin(), cur.end(), occ_.begin() + idx * modes_);
      ++idx;
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      cur[mode] = v;
      enumerate(mode + 1, budget - v, cur, idx);
    }
    cur[mode] = 0;
  }

  int modes_;
  int cutoff_;
  long dim_ = 0;
  std::vector<std::int64_t> binom_;
  std::vector<int> occ_;
};

CMat expm_hermitian(const CMat& h, double sign) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  CVec ph(h.rows());
  for (int i = 0; i < h.rows(); ++i) ph(i) = std::polar(1.0, sign * es.eigenvalues()(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// D(beta) S(zeta)|0> in a padded single-mode space. The squeezed vacuum uses
// its closed-form amplitudes; the displacement uses the normal-ordered form
// exp(-|b|^2/2) exp(b a^dag) exp(-b* a), which is exact on every retained
// component as long as the input has negligible weight beyond `dim`.
CVec single_mode_ket(double r, double theta, cplx beta, int dim) {
  CVec v = CVec::Zero(dim);
  v(0) = 1.0 / std::sqrt(std::cosh(r));
  cplx ratio = -std::polar(std::tanh(r), theta);
  for (int n = 0; 2 * n + 2 < dim; ++n)
    v(2 * n + 2) = v(2 * n) * ratio * std::sqrt((2.0 * n + 1) * (2.0 * n + 2)) / (2.0 * (n + 1));
  if (beta == cplx(0, 0)) return v;

  // w = exp(-b* a) v: w_m = sum_k (-b*)^k / k! sqrt((m+k)!/m!) v_{m+k}
  CVec w = CVec::Zero(dim);
  for (int m = 0; m < dim; ++m) {
    cplx term(1, 0), acc(0, 0);
    for (int k = 0; m + k < dim; ++k) {
      if (k > 0) term *= -std::conj(beta) * std::sqrt(static_cast<double>(m + k)) / static_cast<double>(k);
      acc += term * v(m + k);
    }
    w(m) = acc;
  }
  // u = exp(b a^dag) w: u_n = sum_j b^j / j! sqrt(n!/(n-j)!) w_{n-j}
  CVec u = CVec::Zero(dim);
  for (int n = 0; n < dim; ++n) {
    cplx term(1, 0), acc(0, 0);
    for (int j = 0; j <= n; ++j) {
      if (j > 0) term *= beta * std::sqrt(static_cast<double>(n - j + 1)) / static_cast<double>(j);
      acc += term * w(n - j);
    }
    u(n) = acc;
  }
  return u * std::exp(-0.5 * std::norm(beta));
}

struct Circuit {
  int system = 0;
  int total = 0;
  Vec r, theta;
  CVec beta;
  CMat V;  // total x total passive unitary
  std::vector<int> loss_mode;  // system mode -> loss ancilla, -1 if lossless
};

// Expands a recipe to a product input plus one passive unitary on all modes.
Circuit build_circuit(const FockRecipe& rc, bool explicit_loss) {
  const int m = rc.modes();
  Vec r = rc.r.size() ? rc.r : Vec::Zero(m);
  Vec theta = rc.theta.size() ? rc.theta : Vec::Zero(m);
  CVec alpha = rc.alpha.size() ? rc.alpha : CVec::Zero(m);
  Vec nbar = rc.nbar.size() ? rc.nbar : Vec::Zero(m);
  Vec eta = rc.eta.size() ? rc.eta : Vec::Ones(m);
  CMat U = rc.U.size() ? rc.U : CMat::Identity(m, m);
  if (r.size() != m || theta.size() != m || alpha.size() != m || nbar.size() != m ||
      eta.size() != m || U.rows() != m || U.cols() != m)
    throw std::invalid_argument("fock recipe fields have inconsistent lengths");
  if ((r.array() < 0).any() || (nbar.array() < 0).any())
    throw std::domain_error("negative squeezing or occupation in fock recipe");
  if ((eta.array() < 0).any() || (eta.array() > 1).any())
    throw std::domain_error("transmissivity outside [0, 1] in fock recipe");
  check_unitary({U});

  std::vector<int> thermal;
  for (int i = 0; i < m; ++i) {
    if (nbar(i) > 0) {
      if (r(i) > 0 || alpha(i) != cplx(0, 0))
        throw std::invalid_argument("fock recipe: thermal modes cannot be squeezed or displaced");
      thermal.push_back(i);
    }
  }
  Circuit c;
  c.system = m;
  c.loss_mode.assign(m, -1);
  int next = m + static_cast<int>(thermal.size());
  if (explicit_loss)
    for (int i = 0; i < m; ++i)
      if (eta(i) < 1) c.loss_mode[i] = next++;
  c.total = next;
  c.r = Vec::Zero(c.total);
  c.theta = Vec::Zero(c.total);
  c.beta = CVec::Zero(c.total);
  c.r.head(m) = r;
  c.theta.head(m) = theta;
  c.beta.head(m) = alpha;

  CMat bth = CMat::Identity(c.total, c.total);
  for (std::size_t t = 0; t < thermal.size(); ++t) {
    int s = thermal[t], a = m + static_cast<int>(t);
    double rr = std::asinh(std::sqrt(nbar(s)));
    c.r(s) = rr;
    c.r(a) = rr;
    c.theta(a) = std::numbers::pi;
    double h = std::sqrt(0.5);
    bth(s, s) = h;
    bth(s, a) = h;
    bth(a, s) = -h;
    bth(a, a) = h;
  }
  CMat big = CMat::Identity(c.total, c.total);
  big.topLeftCorner(m, m) = U;
  CMat bl = CMat::Identity(c.total, c.total);
  for (int i = 0; i < m; ++i) {
    int l = c.loss_mode[i];
    if (l < 0) continue;
    double t = std::sqrt(eta(i)), q = std::sqrt(1 - eta(i));
    bl(i, i) = t;
    bl(i, l) = -q;
    bl(l, i) = q;
    bl(l, l) = t;
  }
  c.V = bl * big * bth;
  return c;
}

int padded_dim(int cutoff) { return std::max(cutoff + 80, 2 * cutoff + 20); }

Vec total_number_distribution(const Circuit& c, int cutoff) {
  int dim = padded_dim(cutoff);
  Vec dist = Vec::Zero(cutoff + 1);
  dist(0) = 1.0;
  for (int k = 0; k < c.total; ++k) {
    CVec ket = single_mode_ket(c.r(k), c.theta(k), c.beta(k), dim);
    Vec p = ket.cwiseAbs2();
    Vec next = Vec::Zero(cutoff + 1);
    for (int s = 0; s <= cutoff; ++s)
      for (int v = 0; v + s <= cutoff; ++v) next(s + v) += dist(s) * p(v);
    dist = next;
  }
  return dist;
}

double deficit_of(const Circuit& c, int cutoff) {
  return std::max(0.0, 1.0 - total_number_distribution(c, cutoff).sum());
}

// Applies an embedded two-mode unitary t on modes (p, q) to psi.
void apply_two_mode(const SimplexBasis& basis, CVec& psi, int p, int q, const Eigen::Matrix2cd& t) {
  Eigen::ComplexSchur<Eigen::Matrix2cd> schur(t);
  Eigen::Matrix2cd logd = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i) logd(i, i) = cplx(0, -1) * std::log(schur.matrixT()(i, i));
  Eigen::Matrix2cd g = schur.matrixU() * logd * schur.matrixU().adjoint();
  g = 0.5 * (g + g.adjoint()).eval();

  const int cutoff = basis.cutoff();
  std::vector<CMat> ek(cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) {
    CMat h = CMat::Zero(k + 1, k + 1);
    for (int m = 0; m <= k; ++m) {
      double np = k - m, nq = m;
      h(m, m) = g(0, 0) * np + g(1, 1) * nq;
      if (m > 0) h(m - 1, m) = g(0, 1) * std::sqrt((np + 1) * nq);
      if (m < k) h(m + 1, m) = g(1, 0) * std::sqrt(np * (nq + 1));
    }
    ek[k] = expm_hermitian(0.5 * (h + h.adjoint()), 1.0);
  }
  std::vector<int> occ(basis.modes());
  std::vector<long> idx;
  CVec block, out;
  for (long b = 0; b < basis.dim(); ++b) {
    const int* o = basis.occ(b);
    if (o[q] != 0) continue;
    int k = o[p];
    std::copy(o, o + basis.modes(), occ.begin());
    idx.resize(k + 1);
    block.resize(k + 1);
    for (int m = 0; m <= k; ++m) {
      occ[p] = k - m;
      occ[q] = m;
      idx[m] = basis.rank(occ.data());
      block(m) = psi(idx[m]);
    }
    out = ek[k] * block;
    for (int m = 0; m <= k; ++m) psi(idx[m]) = out(m);
  }
}

// Applies the Fock representation of V: U_hat a_k^dag U_hat^dag = sum_i V_ik a_i^dag.
void apply_passive(const SimplexBasis& basis, CVec& psi, const CMat& V) {
  const int n = static_cast<int>(V.rows());
  CMat w = V;
  struct Op {
    int p, q;
    Eigen::Matrix2cd t;
  };
  std::vector<Op> ops;
  for (int c = 0; c + 1 < n; ++c) {
    for (int r = c + 1; r < n; ++r) {
      cplx a = w(c, c), b = w(r, c);
      double nn = std::hypot(std::abs(a), std::abs(b));
      if (std::abs(b) == 0 || nn == 0) continue;
      Eigen::Matrix2cd g;
      g << std::conj(a) / nn, std::conj(b) / nn, -b / nn, a / nn;
      Eigen::RowVectorXcd rc = w.row(c), rr = w.row(r);
      w.row(c) = g(0, 0) * rc + g(0, 1) * rr;
      w.row(r) = g(1, 0) * rc + g(1, 1) * rr;
      ops.push_back({c, r, g.adjoint()});
    }
  }
  // Now V = G_1^dag ... G_K^dag D with D = diag(w).
  for (long b = 0; b < basis.dim(); ++b) {
    const int* o = basis.occ(b);
    cplx f(1, 0);
    for (int k = 0; k < n; ++k)
      for (int e = 0; e < o[k]; ++e) f *= w(k, k);
    psi(b) *= f;
  }
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) apply_two_mode(basis, psi, it->p, it->q, it->t);
}

CVec evolve(const Circuit& c, const SimplexBasis& basis) {
  std::vector<CVec> kets(c.total);
  int dim = padded_dim(basis.cutoff());
  for (int k = 0; k < c.total; ++k) kets[k] = single_mode_ket(c.r(k), c.theta(k), c.beta(k), dim);
  CVec psi(basis.dim());
  for (long b = 0; b < basis.dim(); ++b) {
    const int* o = basis.occ(b);
    cplx v(1, 0);
    for (int k = 0; k < c.total; ++k) v *= kets[k](o[k]);
    psi(b) = v;
  }
  apply_passive(basis, psi, c.V);
  return psi;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void require_cutoff(double deficit, int cutoff, double max_deficit) {
  if (deficit > max_deficit)
    throw CutoffTooSmall("cutoff " + std::to_string(cutoff) + " leaves norm deficit " +
                             sci(deficit) + " above " + sci(max_deficit),
                         deficit);
}

}  // namespace

int FockRecipe::modes() const {
  long m = std::max({r.size(), theta.size(), alpha.size(), nbar.size(), U.rows(), eta.size()});
  return static_cast<int>(m);
}

GaussianState FockRecipe::gaussian() const {
  const int m = modes();
  Vec rr = r.size() ? r : Vec::Zero(m);
  Vec th = theta.size() ? theta : Vec::Zero(m);
  GaussianState s = make_squeezed_vacuum(rr, th);
  if (nbar.size()) {
    for (int i = 0; i < m; ++i) {
      if (nbar(i) <= 0) continue;
      if (rr(i) > 0) throw std::invalid_argument("fock recipe: thermal modes cannot be squeezed");
      s.N(i, i) = nbar(i);
    }
  }
  if (alpha.size()) s = displace(s, alpha);
  if (U.size()) s = apply_unitary(s, {U});
  if (eta.size()) s = apply_loss(s, eta);
  return s;
}

double fock_norm_deficit(const FockRecipe& recipe, int cutoff) {
  return deficit_of(build_circuit(recipe, false), cutoff);
}

int choose_cutoff(const FockRecipe& recipe, double max_deficit, int max_cutoff) {
  Circuit c = build_circuit(recipe, false);
  double mass = 0.0;
  // Grow the search window so the padded single-mode spaces stay small.
  for (int window = std::min(32, max_cutoff);; window = std::min(2 * window, max_cutoff)) {
    Vec dist = total_number_distribution(c, window);
    mass = 0.0;
    for (int n = 0; n <= window; ++n) {
      mass += dist(n);
      if (1.0 - mass <= max_deficit) return n;
    }
    if (window == max_cutoff) break;
  }
  throw CutoffTooSmall("no cutoff up to " + std::to_string(max_cutoff) + " reaches deficit " +
                           sci(max_deficit),
                       1.0 - mass);
}

FockDistribution fock_oracle_distribution(const FockRecipe& recipe, int cutoff, double max_deficit) {
  Circuit c = build_circuit(recipe, false);
  FockDistribution out;
  out.cutoff = cutoff;
  out.deficit = deficit_of(c, cutoff);
  require_cutoff(out.deficit, cutoff, max_deficit);
  out.eta = recipe.eta.size() ? recipe.eta : Vec::Ones(c.system);

  SimplexBasis basis(c.total, cutoff);
  CVec psi = evolve(c, basis);
  SimplexBasis sys(c.system, cutoff);
  Vec prob = Vec::Zero(sys.dim());
  for (long b = 0; b < basis.dim(); ++b) prob(sys.rank(basis.occ(b))) += std::norm(psi(b));
  out.prob = prob;
  out.occupations.resize(sys.dim());
  for (long i = 0; i < sys.dim(); ++i)
    out.occupations[i].assign(sys.occ(i), sys.occ(i) + c.system);
  return out;
}

PhotonMoments fock_oracle_moments(const FockRecipe& recipe, int cutoff, double max_deficit) {
  FockDistribution d = fock_oracle_distribution(recipe, cutoff, max_deficit);
  const int m = static_cast<int>(d.eta.size());
  Vec en = Vec::Zero(m);
  Mat enn = Mat::Zero(m, m);
  for (std::size_t i = 0; i < d.occupations.size(); ++i) {
    double p = d.prob(static_cast<long>(i));
    if (p == 0) continue;
    const auto& o = d.occupations[i];
    for (int a = 0; a < m; ++a) {
      en(a) += p * o[a];
      for (int b = 0; b < m; ++b) enn(a, b) += p * o[a] * o[b];
    }
  }
  PhotonMoments out{Vec(m), Mat(m, m)};
  for (int a = 0; a < m; ++a) out.mu(a) = d.eta(a) * en(a);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      double second = d.eta(a) * d.eta(b) * enn(a, b);
      if (a == b) second += d.eta(a) * (1 - d.eta(a)) * en(a);
      out.sigma(a, b) = second - out.mu(a) * out.mu(b);
    }
  }
  return out;
}

double fock_oracle_purity(const FockRecipe& recipe, int cutoff, double max_deficit) {
  Circuit c = build_circuit(recipe, true);
  double deficit = deficit_of(c, cutoff);
  require_cutoff(deficit, cutoff, max_deficit);
  SimplexBasis basis(c.total, cutoff);
  CVec psi = evolve(c, basis);
  const int env_modes = c.total - c.system;
  SimplexBasis sys(c.system, cutoff);
  if (env_modes == 0) return std::pow(psi.squaredNorm(), 2);
  SimplexBasis env(env_modes, cutoff);
  CMat amp = CMat::Zero(sys.dim(), env.dim());
  for (long b = 0; b < basis.dim(); ++b) {
    const int* o = basis.occ(b);
    amp(sys.rank(o), env.rank(o + c.system)) = psi(b);
  }
  CMat gram = amp.rows() <= amp.cols() ? CMat(amp * amp.adjoint()) : CMat(amp.adjoint() * amp);
  return gram.squaredNorm();
}

FockRecipe random_recipe(int modes, const OracleCheckOptions& opt, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  FockRecipe r;
  r.r = Vec(modes);
  r.theta = Vec(modes);
  r.alpha = CVec(modes);
  r.eta = Vec(modes);
  for (int i = 0; i < modes; ++i) {
    r.r(i) = opt.r_max * u(rng);
    r.theta(i) = two_pi * u(rng);
    r.alpha(i) = std::polar(opt.alpha_max * u(rng), two_pi * u(rng));
    r.eta(i) = opt.eta_min + (1.0 - opt.eta_min) * u(rng);
  }
  r.U = haar_unitary(modes, rng);
  return r;
}

OracleCheck check_moments_against_oracle(const OracleCheckOptions& opt) {
  Rng rng(derive_seed(opt.seed, "oracle"));
  OracleCheck out;
  out.configs = opt.configs;
  for (int c = 0; c < opt.configs; ++c) {
    int m = 1 + c % opt.max_modes;
    FockRecipe recipe = random_recipe(m, opt, rng);
    int cut = choose_cutoff(recipe, opt.max_deficit);
    PhotonMoments a = photon_moments(recipe.gaussian());
    PhotonMoments b = fock_oracle_moments(recipe, cut, opt.max_deficit);
    double scale = std::max(a.mu.cwiseAbs().maxCoeff(), a.sigma.cwiseAbs().maxCoeff());
    double diff = std::max((a.mu - b.mu).cwiseAbs().maxCoeff(), (a.sigma - b.sigma).cwiseAbs().maxCoeff());
    double err = scale > 0 ? diff / scale : diff;
    out.errors.push_back(err);
    out.cutoffs.push_back(cut);
    if (err > out.worst || out.worst_index < 0) {
      out.worst = err;
      out.worst_index = c;
    }
  }
  return out;
}

}  // namespace qrc
