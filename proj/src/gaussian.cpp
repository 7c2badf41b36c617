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

#include "qrc/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qrc {

std::string to_string(SourceKind k) {
  switch (k) {
    case SourceKind::squeezed: return "squeezed";
    case SourceKind::coherent: return "coherent";
    case SourceKind::thermal: return "thermal";
    case SourceKind::supercontinuum: return "supercontinuum";
  }
  return "unknown";
}

SourceKind source_kind_from_string(const std::string& s) {
  if (s == "squeezed") return SourceKind::squeezed;
  if (s == "coherent") return SourceKind::coherent;
  if (s == "thermal") return SourceKind::thermal;
  if (s == "supercontinuum") return SourceKind::supercontinuum;
  throw std::invalid_argument("unknown source kind '" + s +
                              "' (expected squeezed, coherent, thermal, supercontinuum)");
}

int SourceSpec::modes() const {
  switch (kind) {
    case SourceKind::squeezed: return static_cast<int>(r.size());
    case SourceKind::thermal: return static_cast<int>(nbar.size());
    default: return static_cast<int>(alpha.size());
  }
}

void SourceSpec::validate() const {
  if (kind == SourceKind::squeezed && (r.array() < 0).any())
    throw std::domain_error("squeezing parameters must be >= 0");
  if (kind == SourceKind::thermal && (nbar.array() < 0).any())
    throw std::domain_error("thermal occupations must be >= 0");
  if (g < 0) throw std::domain_error("supercontinuum g must be >= 0");
}

GaussianState vacuum(int modes) {
  return {CVec::Zero(modes), CMat::Zero(modes, modes), CMat::Zero(modes, modes)};
}

GaussianState make_squeezed_vacuum(const Vec& r) {
  return make_squeezed_vacuum(r, Vec::Zero(r.size()));
}

GaussianState make_squeezed_vacuum(const Vec& r, const Vec& theta) {
  if (theta.size() != r.size())
    throw std::invalid_argument("squeezing angle vector length mismatch");
  if ((r.array() < 0).any()) throw std::domain_error("squeezing parameters must be >= 0");
  GaussianState s = vacuum(static_cast<int>(r.size()));
  for (int i = 0; i < r.size(); ++i) {
    double sh = std::sinh(r(i)), ch = std::cosh(r(i));
    s.N(i, i) = sh * sh;
    s.Mm(i, i) = -std::polar(sh * ch, theta(i));
  }
  return s;
}

GaussianState make_coherent(const CVec& alpha) {
  GaussianState s = vacuum(static_cast<int>(alpha.size()));
  s.alpha = alpha;
  return s;
}

GaussianState make_thermal(const Vec& nbar) {
  if ((nbar.array() < 0).any()) throw std::domain_error("thermal occupations must be >= 0");
  GaussianState s = vacuum(static_cast<int>(nbar.size()));
  s.N.diagonal() = nbar.cast<cplx>();
  return s;
}

SupercontinuumSource make_supercontinuum(const CVec& alpha, double g) {
  if (g < 0) throw std::domain_error("supercontinuum g must be >= 0");
  return {alpha, g};
}

GaussianState make_state(const SourceSpec& src) {
  src.validate();
  switch (src.kind) {
    case SourceKind::squeezed: return make_squeezed_vacuum(src.r);
    case SourceKind::thermal: return make_thermal(src.nbar);
    default: return make_coherent(src.alpha);
  }
}

GaussianState displace(const GaussianState& s, const CVec& beta) {
  if (beta.size() != s.modes()) throw std::invalid_argument("displacement length mismatch");
  GaussianState out = s;
  out.alpha += beta;
  return out;
}

void check_unitary(const PassiveUnitary& u, double tol) {
  const int m = u.modes();
  if (u.U.cols() != m) throw ContractViolation("unitary must be square");
  double err = (u.U.adjoint() * u.U - CMat::Identity(m, m)).cwiseAbs().maxCoeff();
  if (!(err <= tol))
    throw ContractViolation("matrix is not unitary: max |U^dag U - I| = " + std::to_string(err));
}

GaussianState apply_unitary(const GaussianState& s, const PassiveUnitary& u) {
  if (u.modes() != s.modes()) throw std::invalid_argument("unitary dimension mismatch");
  check_unitary(u);
  const CMat& U = u.U;
  GaussianState out;
  out.alpha = U * s.alpha;
  out.N = U.conjugate() * s.N * U.transpose();
  out.Mm = U * s.Mm * U.transpose();
  return out;
}

namespace {

void check_eta(const Vec& eta, int modes) {
  if (eta.size() != modes) throw std::invalid_argument("loss vector length mismatch");
  if ((eta.array() < 0).any() || (eta.array() > 1).any())
    throw std::domain_error("transmissivities must lie in [0, 1]");
}

}  // namespace

GaussianState apply_loss(const GaussianState& s, const Vec& eta) {
  check_eta(eta, s.modes());
  Vec t = eta.cwiseSqrt();
  CMat tt = (t * t.transpose()).cast<cplx>();
  GaussianState out;
  out.alpha = s.alpha.cwiseProduct(t.cast<cplx>());
  out.N = s.N.cwiseProduct(tt);
  out.Mm = s.Mm.cwiseProduct(tt);
  return out;
}

SupercontinuumSource apply_unitary(const SupercontinuumSource& s, const PassiveUnitary& u) {
  if (u.modes() != s.alpha.size()) throw std::invalid_argument("unitary dimension mismatch");
  check_unitary(u);
  return {u.U * s.alpha, s.g};
}

SupercontinuumSource apply_loss(const SupercontinuumSource& s, const Vec& eta) {
  check_eta(eta, static_cast<int>(s.alpha.size()));
  return {s.alpha.cwiseProduct(eta.cwiseSqrt().cast<cplx>()), s.g};
}

PhotonMoments photon_moments(const GaussianState& s) {
  check_state(s);
  const int m = s.modes();
  const CVec& a = s.alpha;
  PhotonMoments out{Vec(m), Mat(m, m)};
  for (int i = 0; i < m; ++i) out.mu(i) = s.N(i, i).real() + std::norm(a(i));
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      double v = std::norm(s.N(i, j)) + std::norm(s.Mm(i, j)) +
                 2.0 * (a(i) * std::conj(a(j)) * s.N(i, j)).real() +
                 2.0 * (std::conj(a(i) * a(j)) * s.Mm(i, j)).real();
      if (i == j) v += s.N(i, i).real() + std::norm(a(i));
      out.sigma(i, j) = v;
      out.sigma(j, i) = v;
    }
  }
  return out;
}

PhotonMoments photon_moments(const SupercontinuumSource& s) {
  Vec mu = s.alpha.cwiseAbs2();
  Mat sigma = s.g * mu * mu.transpose();
  sigma.diagonal() += mu;
  return {mu, sigma};
}

Mat quadrature_covariance(const GaussianState& s) {
  const int m = s.modes();
  Mat sig(2 * m, 2 * m);
  Mat nr = s.N.real(), ni = s.N.imag(), mr = s.Mm.real(), mi = s.Mm.imag();
  Mat id = 0.5 * Mat::Identity(m, m);
  sig.topLeftCorner(m, m) = nr + mr + id;
  sig.bottomRightCorner(m, m) = nr - mr + id;
  sig.topRightCorner(m, m) = mi + ni;
  sig.bottomLeftCorner(m, m) = (mi + ni).transpose();
  return sig;
}

namespace {

Mat omega(int m) {
  Mat o = Mat::Zero(2 * m, 2 * m);
  o.topRightCorner(m, m) = Mat::Identity(m, m);
  o.bottomLeftCorner(m, m) = -Mat::Identity(m, m);
  return o;
}

}  // namespace

double physicality_margin(const GaussianState& s) {
  const int m = s.modes();
  if (m == 0) return 0.0;
  CMat h = quadrature_covariance(s).cast<cplx>() + cplx(0, 0.5) * omega(m).cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void check_state(const GaussianState& s) {
  const int m = s.modes();
  if (s.N.rows() != m || s.N.cols() != m || s.Mm.rows() != m || s.Mm.cols() != m)
    throw ContractViolation("state matrices do not match the mode count");
  double scale = 1.0 + std::max(s.N.cwiseAbs().maxCoeff(), s.Mm.cwiseAbs().maxCoeff());
  if (m > 0) {
    if ((s.N - s.N.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw ContractViolation("N is not Hermitian");
    if ((s.Mm - s.Mm.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw ContractViolation("Mm is not symmetric");
    if (s.N.diagonal().real().minCoeff() < -1e-12)
      throw ContractViolation("diag(N) has a negative entry");
  }
  double margin = physicality_margin(s);
  if (margin < -1e-9 * scale)
    throw ContractViolation("state violates the uncertainty relation (margin " +
                            std::to_string(margin) + ")");
}

int SymplecticSpectrum::supermodes(double threshold) const {
  return static_cast<int>((r.array() > threshold).count());
}

SymplecticSpectrum williamson_bloch_messiah(const GaussianState& s) {
  check_state(s);
  const int m = s.modes();
  SymplecticSpectrum out;
  if (m == 0) return out;
  Mat sig = quadrature_covariance(s);
  Eigen::SelfAdjointEigenSolver<Mat> es(sig);
  if (es.eigenvalues()(0) <= 0)
    throw ContractViolation("quadrature covariance is not positive definite");
  Vec ev = es.eigenvalues();
  Mat half = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  Mat inv_half =
      es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  Mat a = inv_half * omega(m) * inv_half;
  a = 0.5 * (a - a.transpose());

  // The real Schur form of an antisymmetric matrix is block diagonal with
  // 2x2 blocks [[0, b], [-b, 0]], |b| = 1/nu.
  Eigen::RealSchur<Mat> schur(a);
  Mat t = schur.matrixT();
  Mat o = schur.matrixU();
  std::vector<std::pair<double, int>> blocks;
  for (int k = 0; k < 2 * m;) {
    if (k + 1 < 2 * m && std::abs(t(k + 1, k)) > 0) {
      if (t(k, k + 1) < 0) o.col(k).swap(o.col(k + 1));
      blocks.push_back({1.0 / std::abs(t(k, k + 1)), k});
      k += 2;
    } else {
      throw ContractViolation("symplectic decomposition failed: unpaired eigenvalue");
    }
  }
  std::sort(blocks.begin(), blocks.end());
  Mat op(2 * m, 2 * m);
  out.nu.resize(m);
  for (int j = 0; j < m; ++j) {
    out.nu(j) = blocks[j].first;
    op.col(j) = o.col(blocks[j].second);
    op.col(m + j) = o.col(blocks[j].second + 1);
  }
  Vec inv_sqrt_nu(2 * m);
  inv_sqrt_nu << out.nu.cwiseSqrt().cwiseInverse(), out.nu.cwiseSqrt().cwiseInverse();
  Mat symp = half * op * inv_sqrt_nu.asDiagonal();
  Eigen::JacobiSVD<Mat> svd(symp);
  Vec sv = svd.singularValues();
  out.r.resize(m);
  for (int j = 0; j < m; ++j) out.r(j) = std::max(0.0, std::log(sv(j)));
  out.purity = 1.0;
  for (int j = 0; j < m; ++j) out.purity /= 2.0 * out.nu(j);
  return out;
}

}  // namespace qrc
