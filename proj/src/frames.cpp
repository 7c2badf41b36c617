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

#include "qrc/frames.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "qrc/fock.hpp"
#include "qrc/rng.hpp"

namespace qrc {

std::string to_string(SamplingMode m) {
  switch (m) {
    case SamplingMode::exact_small: return "exact_small";
    case SamplingMode::classical_mixture: return "classical_mixture";
    case SamplingMode::estimator_asymptotic: return "estimator_asymptotic";
  }
  return "unknown";
}

SamplingMode sampling_mode_from_string(const std::string& s) {
  if (s == "exact_small") return SamplingMode::exact_small;
  if (s == "classical_mixture") return SamplingMode::classical_mixture;
  if (s == "estimator_asymptotic") return SamplingMode::estimator_asymptotic;
  throw std::invalid_argument("unknown sampling mode '" + s +
                              "' (expected exact_small, classical_mixture, estimator_asymptotic)");
}

DetectionModel DetectionModel::centered(int modes, int pixels, double efficiency, double readout_sigma) {
  if (modes > pixels) throw std::invalid_argument("detection: more modes than pixels");
  DetectionModel d;
  d.efficiency = Vec::Constant(pixels, efficiency);
  d.readout_sigma = readout_sigma;
  d.mode_of_pixel.assign(pixels, -1);
  int offset = (pixels - modes) / 2;
  for (int m = 0; m < modes; ++m) d.mode_of_pixel[offset + m] = m;
  return d;
}

void DetectionModel::validate(int modes) const {
  if (static_cast<int>(mode_of_pixel.size()) != pixels())
    throw std::invalid_argument("detection: mode map length must equal the pixel count");
  if ((efficiency.array() < 0).any() || (efficiency.array() > 1).any())
    throw std::domain_error("detection: efficiencies must lie in [0, 1]");
  if (readout_sigma < 0) throw std::domain_error("detection: readout sigma must be >= 0");
  std::vector<char> seen(modes, 0);
  for (int m : mode_of_pixel) {
    if (m < 0) continue;
    if (m >= modes) throw std::invalid_argument("detection: pixel maps to a nonexistent mode");
    if (seen[m]) throw std::invalid_argument("detection: mode mapped to more than one pixel");
    seen[m] = 1;
  }
}

namespace {

PhotonMoments mode_moments(const ReservoirRun& run) {
  if (run.source.kind == SourceKind::supercontinuum) {
    SupercontinuumSource sc = make_supercontinuum(run.source.alpha, run.source.g);
    return photon_moments(apply_loss(apply_unitary(sc, run.U), run.eta));
  }
  return photon_moments(apply_loss(apply_unitary(make_state(run.source), run.U), run.eta));
}

// Lower factor L with L L^T = S for symmetric PSD S; negative eigenvalues
// from round-off are clamped.
Mat psd_factor(const Mat& s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (s + s.transpose()));
  Vec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal();
}

// Bartlett factor of a standard Wishart(I_n, dof) draw.
Mat bartlett(int n, long dof, Rng& rng) {
  if (dof < n) throw std::invalid_argument("Wishart draw needs at least as many degrees of freedom as pixels");
  std::normal_distribution<double> nd;
  Mat a = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    std::chi_squared_distribution<double> chi(static_cast<double>(dof - i));
    a(i, i) = std::sqrt(chi(rng));
    for (int j = 0; j < i; ++j) a(i, j) = nd(rng);
  }
  return a;
}

double readout(double value, double sigma, std::normal_distribution<double>& nd, Rng& rng) {
  if (sigma > 0) value += sigma * nd(rng);
  return std::max(value, 0.0);
}

double poisson(double mean, Rng& rng) {
  if (!(mean > 0)) return 0.0;
  std::poisson_distribution<long> pd(mean);
  return static_cast<double>(pd(rng));
}

FrameSet sample_exact(const ReservoirRun& run, const DetectionModel& det, long frames, std::uint64_t seed) {
  const int m = run.source.modes();
  if (m > 4) throw std::invalid_argument("exact_small supports at most 4 modes; use estimator_asymptotic");
  if (run.source.kind == SourceKind::supercontinuum)
    throw std::invalid_argument("exact_small needs a Gaussian source; use classical_mixture for supercontinuum");
  FockRecipe rc;
  switch (run.source.kind) {
    case SourceKind::squeezed: rc.r = run.source.r; break;
    case SourceKind::coherent: rc.alpha = run.source.alpha; break;
    default: rc.nbar = run.source.nbar; break;
  }
  rc.U = run.U.U;
  FockDistribution dist = fock_oracle_distribution(rc, choose_cutoff(rc, 1e-10), 1e-10);
  std::vector<double> cdf(dist.prob.size());
  double acc = 0.0;
  for (long i = 0; i < dist.prob.size(); ++i) cdf[i] = (acc += dist.prob(i));

  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, acc);
  std::normal_distribution<double> nd;
  FrameSet fs{RowMat::Zero(frames, det.pixels()), seed};
  for (long f = 0; f < frames; ++f) {
    long idx = std::lower_bound(cdf.begin(), cdf.end(), unif(rng)) - cdf.begin();
    idx = std::min<long>(idx, static_cast<long>(cdf.size()) - 1);
    const auto& occ = dist.occupations[idx];
    for (int p = 0; p < det.pixels(); ++p) {
      int mode = det.mode_of_pixel[p];
      double n = 0.0;
      if (mode >= 0 && occ[mode] > 0) {
        std::binomial_distribution<int> thin(occ[mode], run.eta(mode) * det.efficiency(p));
        n = thin(rng);
      }
      fs.frames(f, p) = readout(n, det.readout_sigma, nd, rng);
    }
  }
  return fs;
}

FrameSet sample_classical(const ReservoirRun& run, const DetectionModel& det, long frames,
                          std::uint64_t seed) {
  const SourceSpec& src = run.source;
  if (src.kind == SourceKind::squeezed)
    throw std::invalid_argument(
        "squeezed light has no classical P-distribution; use exact_small (M <= 4) or estimator_asymptotic");
  const int m = src.modes();
  Rng rng(seed);
  std::normal_distribution<double> nd;
  std::gamma_distribution<double> gamma(src.g > 0 ? 1.0 / src.g : 1.0, src.g > 0 ? src.g : 1.0);
  Vec sqrt_eta = run.eta.cwiseSqrt();
  FrameSet fs{RowMat::Zero(frames, det.pixels()), seed};
  CVec in(m);
  for (long f = 0; f < frames; ++f) {
    switch (src.kind) {
      case SourceKind::coherent: in = src.alpha; break;
      case SourceKind::thermal:
        for (int i = 0; i < m; ++i) {
          double s = std::sqrt(0.5 * src.nbar(i));
          double re = nd(rng), im = nd(rng);
          in(i) = cplx(s * re, s * im);
        }
        break;
      default: in = src.g > 0 ? CVec(std::sqrt(gamma(rng)) * src.alpha) : src.alpha; break;
    }
    CVec out = (run.U.U * in).cwiseProduct(sqrt_eta.cast<cplx>());
    for (int p = 0; p < det.pixels(); ++p) {
      int mode = det.mode_of_pixel[p];
      double n = mode >= 0 ? poisson(det.efficiency(p) * std::norm(out(mode)), rng) : 0.0;
      fs.frames(f, p) = readout(n, det.readout_sigma, nd, rng);
    }
  }
  return fs;
}

// Normally ordered moments <a_i^+k a_j^+l a_i^k a_j^l> (factorial moments
// of the counts) for one light field.
class FactorialMoments {
 public:
  explicit FactorialMoments(const ReservoirRun& run, const Vec& extra_eta) {
    sc_ = run.source.kind == SourceKind::supercontinuum;
    if (sc_) {
      auto s = apply_loss(apply_loss(apply_unitary(make_supercontinuum(run.source.alpha, run.source.g), run.U),
                                     run.eta),
                          extra_eta);
      intensity_ = s.alpha.cwiseAbs2();
      g_ = s.g;
    } else {
      state_ = apply_loss(apply_loss(apply_unitary(make_state(run.source), run.U), run.eta), extra_eta);
    }
  }

  double operator()(int i, int k, int j, int l) const {
    if (sc_) {
      double gamma = 1.0;
      for (int t = 0; t < k + l; ++t) gamma *= 1.0 + t * g_;
      return std::pow(intensity_(i), k) * std::pow(intensity_(j), l) * gamma;
    }
    ops_.clear();
    for (int t = 0; t < k; ++t) ops_.push_back({i, true});
    for (int t = 0; t < l; ++t) ops_.push_back({j, true});
    for (int t = 0; t < k; ++t) ops_.push_back({i, false});
    for (int t = 0; t < l; ++t) ops_.push_back({j, false});
    return wick(0, 0).real();
  }

 private:
  struct Op {
    int mode;
    bool dag;
  };

  cplx mean(const Op& o) const { return o.dag ? std::conj(state_.alpha(o.mode)) : state_.alpha(o.mode); }

  cplx contract(const Op& a, const Op& b) const {
    if (a.dag && b.dag) return std::conj(state_.Mm(a.mode, b.mode));
    if (!a.dag && !b.dag) return state_.Mm(a.mode, b.mode);
    return a.dag ? state_.N(a.mode, b.mode) : state_.N(b.mode, a.mode);
  }

  // Sum over partial matchings; unmatched operators contribute their means.
  cplx wick(std::size_t first, unsigned used) const {
    while (first < ops_.size() && (used >> first & 1u)) ++first;
    if (first == ops_.size()) return 1.0;
    used |= 1u << first;
    cplx total = 0.0;
    cplx m = mean(ops_[first]);
    if (m != 0.0) total += m * wick(first + 1, used);
    for (std::size_t t = first + 1; t < ops_.size(); ++t) {
      if (used >> t & 1u) continue;
      cplx c = contract(ops_[first], ops_[t]);
      if (c != 0.0) total += c * wick(first + 1, used | 1u << t);
    }
    return total;
  }

  bool sc_ = false;
  GaussianState state_;
  Vec intensity_;
  double g_ = 0.0;
  mutable std::vector<Op> ops_;
};

// Stirling numbers of the second kind, S(p, k) for p, k <= 4.
constexpr double kStirling[5][5] = {
    {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 1, 1, 0, 0}, {0, 1, 3, 1, 0}, {0, 1, 7, 6, 1}};
constexpr double kBinom4[5] = {1, 4, 6, 4, 1};
constexpr double kBinom2[3] = {1, 2, 1};

}  // namespace

PhotonMoments pixel_moments(const ReservoirRun& run, const DetectionModel& det) {
  run.source.validate();
  det.validate(run.source.modes());
  PhotonMoments mm = mode_moments(run);
  const int p = det.pixels();
  PhotonMoments out{Vec::Zero(p), Mat::Zero(p, p)};
  for (int a = 0; a < p; ++a) {
    int ma = det.mode_of_pixel[a];
    if (ma < 0) continue;
    double ea = det.efficiency(a);
    out.mu(a) = ea * mm.mu(ma);
    for (int b = 0; b < p; ++b) {
      int mb = det.mode_of_pixel[b];
      if (mb < 0) continue;
      out.sigma(a, b) = ea * det.efficiency(b) * mm.sigma(ma, mb);
    }
    out.sigma(a, a) += ea * (1 - ea) * mm.mu(ma);
  }
  out.sigma.diagonal().array() += det.readout_sigma * det.readout_sigma;
  return out;
}

double expected_total(const ReservoirRun& run, const DetectionModel& det, long frames) {
  return static_cast<double>(frames) * pixel_moments(run, det).mu.sum();
}

Mat covariance_estimate_variance(const ReservoirRun& run, const DetectionModel& det) {
  run.source.validate();
  const int modes = run.source.modes();
  det.validate(modes);
  Vec extra = Vec::Ones(modes);
  for (int p = 0; p < det.pixels(); ++p)
    if (det.mode_of_pixel[p] >= 0) extra(det.mode_of_pixel[p]) = det.efficiency(p);
  FactorialMoments fm(run, extra);
  PhotonMoments pm = pixel_moments(run, det);
  const double s2 = det.readout_sigma * det.readout_sigma;
  const int np = det.pixels();
  Vec var = pm.sigma.diagonal().array() - s2;
  Mat out(np, np);
  for (int a = 0; a < np; ++a) {
    const int ma = det.mode_of_pixel[a];
    for (int b = a; b < np; ++b) {
      const int mb = det.mode_of_pixel[b];
      double c;
      if (a == b) {
        // E[(n - mu)^4] from raw moments, then Gaussian readout noise.
        double raw[5] = {1, 0, 0, 0, 0};
        if (ma >= 0)
          for (int p = 1; p <= 4; ++p)
            for (int k = 1; k <= p; ++k) raw[p] += kStirling[p][k] * fm(ma, k, ma, 0);
        c = 0.0;
        for (int p = 0; p <= 4; ++p) c += kBinom4[p] * std::pow(-pm.mu(a), 4 - p) * raw[p];
        c += 6.0 * s2 * var(a) + 3.0 * s2 * s2;
      } else {
        double raw[3][3] = {{1, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        for (int p = 0; p <= 2; ++p)
          for (int q = 0; q <= 2; ++q) {
            if (p + q == 0) continue;
            if ((p > 0 && ma < 0) || (q > 0 && mb < 0)) continue;
            double acc = 0.0;
            for (int k = p > 0 ? 1 : 0; k <= p; ++k)
              for (int l = q > 0 ? 1 : 0; l <= q; ++l)
                acc += kStirling[p][k] * kStirling[q][l] * fm(ma < 0 ? 0 : ma, k, mb < 0 ? 0 : mb, l);
            raw[p][q] = acc;
          }
        c = 0.0;
        for (int p = 0; p <= 2; ++p)
          for (int q = 0; q <= 2; ++q)
            c += kBinom2[p] * kBinom2[q] * std::pow(-pm.mu(a), 2 - p) * std::pow(-pm.mu(b), 2 - q) * raw[p][q];
        c += s2 * (var(a) + var(b)) + s2 * s2;
      }
      out(a, b) = out(b, a) = std::max(c - pm.sigma(a, b) * pm.sigma(a, b), 0.0);
    }
  }
  return out;
}

MomentEstimate sample_estimator(const PhotonMoments& exact, const Mat& element_variance, long frames,
                                std::uint64_t seed) {
  MomentEstimate est = sample_estimator(exact, frames, seed);
  const long n = static_cast<long>(exact.mu.size());
  if (element_variance.rows() != n || element_variance.cols() != n)
    throw std::invalid_argument("sample_estimator: element variance shape mismatch");
  const double dof = static_cast<double>(frames - 1);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      double wishart = (exact.sigma(i, j) * exact.sigma(i, j) + exact.sigma(i, i) * exact.sigma(j, j)) / dof;
      double target = element_variance(i, j) / dof;
      double ratio = wishart > 0 ? std::sqrt(target / wishart) : 0.0;
      est.sigma(i, j) = exact.sigma(i, j) + ratio * (est.sigma(i, j) - exact.sigma(i, j));
    }
  return est;
}

MomentEstimate sample_estimator(const PhotonMoments& exact, long frames, std::uint64_t seed) {
  if (frames < 2) throw std::invalid_argument("estimator needs at least 2 frames");
  const int p = static_cast<int>(exact.mu.size());
  Rng rng(seed);
  Mat l = psd_factor(exact.sigma);
  MomentEstimate est;
  est.frames = frames;
  est.seed = seed;
  est.mu = exact.mu + l * normal_vector(p, rng) / std::sqrt(static_cast<double>(frames));
  Mat la = l * bartlett(p, frames - 1, rng);
  est.sigma = la * la.transpose() / static_cast<double>(frames - 1);
  return est;
}

Acquisition sample_frames(const ReservoirRun& run, const DetectionModel& det, long frames,
                          SamplingMode mode, std::uint64_t seed) {
  run.source.validate();
  det.validate(run.source.modes());
  check_unitary(run.U);
  if (frames < 2) throw std::invalid_argument("sample_frames: at least 2 frames are required");
  Acquisition acq;
  acq.mode = mode;
  switch (mode) {
    case SamplingMode::exact_small: acq.frames = sample_exact(run, det, frames, seed); break;
    case SamplingMode::classical_mixture: acq.frames = sample_classical(run, det, frames, seed); break;
    case SamplingMode::estimator_asymptotic:
      acq.estimate =
          sample_estimator(pixel_moments(run, det), covariance_estimate_variance(run, det), frames, seed);
      break;
  }
  return acq;
}

std::vector<int> pixel_range(int lo, int hi) {
  std::vector<int> out;
  for (int p = lo; p < hi; ++p) out.push_back(p);
  return out;
}

std::vector<int> complement(const std::vector<int>& set, int pixels) {
  std::vector<char> in(pixels, 0);
  for (int p : set) {
    if (p < 0 || p >= pixels) throw std::invalid_argument("pixel index out of range");
    in[p] = 1;
  }
  std::vector<int> out;
  for (int p = 0; p < pixels; ++p)
    if (!in[p]) out.push_back(p);
  return out;
}

namespace {

std::vector<int> normalized_set(const std::vector<int>& s, int pixels) {
  std::vector<int> out = s;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (int p : out)
    if (p < 0 || p >= pixels) throw std::invalid_argument("pixel index out of range");
  return out;
}

}  // namespace

FrameSet erase_pixels_poisson(const FrameSet& fs, const std::vector<int>& window, std::uint64_t seed) {
  std::vector<int> w = normalized_set(window, fs.num_pixels());
  FrameSet out = fs;
  if (w.empty()) return out;
  Rng rng(seed);
  for (int p : w) {
    double mean = fs.frames.col(p).mean();
    for (long f = 0; f < fs.num_frames(); ++f) out.frames(f, p) = poisson(mean, rng);
  }
  return out;
}

FrameSet restrict_wavelengths(const FrameSet& fs, const std::vector<int>& keep, std::uint64_t seed) {
  return erase_pixels_poisson(fs, complement(keep, fs.num_pixels()), seed);
}

MomentEstimate erase_pixels_poisson(const MomentEstimate& est, const std::vector<int>& window,
                                    std::uint64_t seed) {
  const int p = static_cast<int>(est.mu.size());
  std::vector<int> w = normalized_set(window, p);
  if (w.empty()) return est;
  std::vector<int> k = complement(w, p);
  const int nw = static_cast<int>(w.size()), nk = static_cast<int>(k.size());
  const long dof = est.frames - 1;
  Rng rng(seed);
  std::normal_distribution<double> nd;

  // Erased pixels are independent of everything else. Writing the kept
  // block as Y Y^T / dof with orthonormal-row directions, the erased series'
  // projections onto those directions are i.i.d. normal; the rest of their
  // Gram matrix is Wishart with dof - nk degrees of freedom.
  Vec sd(nw);
  for (int i = 0; i < nw; ++i) sd(i) = std::sqrt(std::max(est.mu(w[i]), 0.0));
  Mat kept(nk, nk);
  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < nk; ++b) kept(a, b) = est.sigma(k[a], k[b]);
  Mat lk = nk > 0 ? psd_factor(kept) : Mat();
  Mat g(nw, nk);
  for (int i = 0; i < nw; ++i)
    for (int j = 0; j < nk; ++j) g(i, j) = sd(i) * nd(rng);
  Mat cross = nk > 0 ? Mat(g * lk.transpose() / std::sqrt(static_cast<double>(dof))) : Mat(nw, 0);
  Mat a = sd.asDiagonal() * bartlett(nw, dof - nk, rng);
  Mat ww = (g * g.transpose() + a * a.transpose()) / static_cast<double>(dof);

  MomentEstimate out = est;
  out.seed = seed;
  for (int i = 0; i < nw; ++i) {
    out.mu(w[i]) = est.mu(w[i]) + sd(i) * nd(rng) / std::sqrt(static_cast<double>(est.frames));
    for (int j = 0; j < nw; ++j) out.sigma(w[i], w[j]) = ww(i, j);
    for (int j = 0; j < nk; ++j) {
      out.sigma(w[i], k[j]) = cross(i, j);
      out.sigma(k[j], w[i]) = cross(i, j);
    }
  }
  return out;
}

MomentEstimate restrict_wavelengths(const MomentEstimate& est, const std::vector<int>& keep,
                                    std::uint64_t seed) {
  return erase_pixels_poisson(est, complement(keep, static_cast<int>(est.mu.size())), seed);
}

double total_counts(const FrameSet& fs) { return fs.frames.sum(); }

}  // namespace qrc
