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

#include "qrc/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qrc/rng.hpp"

namespace qrc {

Vec window_compensation(int pixels, int lo, int hi) {
  Vec c = Vec::Constant(pixels, 0.5);
  double center = 0.5 * (lo + hi), width = hi - lo;
  for (int k = std::max(lo, 0); k < std::min(hi, pixels); ++k)
    c(k) = 0.75 + 0.25 * std::cos(2.0 * std::numbers::pi * (k + 0.5 - center) / width);
  return c;
}

Vec row_compensation(int pixels) {
  Vec c(pixels);
  double center = 0.5 * pixels;
  for (int k = 0; k < pixels; ++k)
    c(k) = 0.75 + 0.25 * std::cos(2.0 * std::numbers::pi * (k + 0.5 - center) / pixels);
  return c;
}

EncoderConfig EncoderConfig::defaults(int d) {
  EncoderConfig c;
  c.d = d;
  double half = 0.5 * (c.window_hi - c.window_lo);
  c.chirp = 20.0 * std::numbers::pi / (half * half);
  c.compensation = window_compensation(c.pixels, c.window_lo, c.window_hi);
  return c;
}

void EncoderConfig::validate() const {
  if (d < 1 || d > pixels) throw std::invalid_argument("encoder: feature count must be in [1, pixels]");
  if (compensation.size() != pixels)
    throw std::invalid_argument("encoder: compensation length must equal the pixel count");
  if ((compensation.array() <= 0).any() || (compensation.array() > 1).any())
    throw std::invalid_argument("encoder: compensation entries must lie in (0, 1]");
  if (window_lo < 0 || window_hi > pixels || window_lo > window_hi)
    throw std::invalid_argument("encoder: pump window must lie within [0, pixels)");
  if (sigma_g < 0) throw std::invalid_argument("encoder: sigma_g must be >= 0");
  if (control_bins < 1) throw std::invalid_argument("encoder: control_bins must be >= 1");
}

Vec gaussian_smooth(const Vec& v, double sigma) {
  if (sigma <= 0 || v.size() == 0) return v;
  int radius = static_cast<int>(std::ceil(4.0 * sigma));
  Vec kernel(2 * radius + 1);
  for (int j = -radius; j <= radius; ++j) kernel(j + radius) = std::exp(-0.5 * j * j / (sigma * sigma));
  kernel /= kernel.sum();
  const int n = static_cast<int>(v.size());
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = -radius; j <= radius; ++j) acc += kernel(j + radius) * v(std::clamp(i + j, 0, n - 1));
    out(i) = acc;
  }
  return out;
}

PhaseMask encode_features(const Vec& x, const EncoderConfig& cfg) {
  cfg.validate();
  if (x.size() != cfg.d)
    throw std::invalid_argument("encode_features: expected " + std::to_string(cfg.d) +
                                " features, got " + std::to_string(x.size()));
  if (!x.allFinite()) throw std::invalid_argument("encode_features: non-finite feature value");
  const int p = cfg.pixels_per_feature();
  Vec rep(cfg.pixels);
  for (int k = 0; k < cfg.pixels; ++k) rep(k) = x(std::min(k / p, cfg.d - 1));
  Vec feat = gaussian_smooth(rep.cwiseProduct(cfg.compensation), cfg.sigma_g);
  PhaseMask m{Vec(cfg.pixels), cfg.d, p, cfg.sigma_g, cfg.chirp, cfg.scale};
  const double k0 = cfg.chirp_center();
  for (int k = 0; k < cfg.pixels; ++k) m.values(k) = cfg.scale * feat(k) + cfg.chirp * (k - k0) * (k - k0);
  return m;
}

int effective_mode_count(const EncoderConfig& cfg) {
  double width = static_cast<double>(cfg.pixels) / cfg.control_bins;
  int count = 0;
  for (int j = 0; j < cfg.control_bins; ++j) {
    double center = (j + 0.5) * width;
    if (center >= cfg.window_lo && center < cfg.window_hi) ++count;
  }
  return count;
}

void ReservoirConfig::validate() const {
  if (modes < 1 || layers < 1) throw std::invalid_argument("reservoir: modes and layers must be >= 1");
  if (static_cast<int>(mixers.size()) != layers + 1)
    throw std::invalid_argument("reservoir: expected layers + 1 mixing unitaries");
  for (const auto& w : mixers) {
    if (w.rows() != modes || w.cols() != modes) throw std::invalid_argument("reservoir: mixer shape");
    check_unitary({w});
  }
  std::vector<char> hit(modes, 0);
  for (int m : mode_of_pixel) {
    if (m >= modes) throw std::invalid_argument("reservoir: binning map out of range");
    if (m >= 0) hit[m] = 1;
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end())
    throw std::invalid_argument("reservoir: binning map does not cover every mode");
  if (eta.size() != modes || (eta.array() < 0).any() || (eta.array() > 1).any())
    throw std::invalid_argument("reservoir: transmission vector must have length M and lie in [0, 1]");
}

ReservoirConfig make_reservoir(int modes, int layers, std::uint64_t seed, const EncoderConfig& enc,
                               double transmission) {
  int width = enc.window_hi - enc.window_lo;
  if (width < modes) throw std::invalid_argument("reservoir: pump window narrower than the mode count");
  ReservoirConfig rc;
  rc.modes = modes;
  rc.layers = layers;
  rc.seed = seed;
  Rng rng(derive_seed(seed, "mixers"));
  for (int k = 0; k <= layers; ++k) rc.mixers.push_back(haar_unitary(modes, rng));
  rc.mode_of_pixel.assign(enc.pixels, -1);
  for (int k = enc.window_lo; k < enc.window_hi; ++k)
    rc.mode_of_pixel[k] = static_cast<int>(static_cast<long>(k - enc.window_lo) * modes / width);
  rc.eta = Vec::Constant(modes, transmission);
  rc.validate();
  return rc;
}

Vec bin_phases(const PhaseMask& mask, const ReservoirConfig& rc) {
  if (mask.values.size() != static_cast<long>(rc.mode_of_pixel.size()))
    throw std::invalid_argument("bin_phases: mask length does not match the binning map");
  Vec sum = Vec::Zero(rc.modes), cnt = Vec::Zero(rc.modes);
  for (std::size_t k = 0; k < rc.mode_of_pixel.size(); ++k) {
    int m = rc.mode_of_pixel[k];
    if (m < 0) continue;
    sum(m) += mask.values(static_cast<long>(k));
    cnt(m) += 1;
  }
  return sum.cwiseQuotient(cnt);
}

PassiveUnitary build_unitary(const PhaseMask& mask, const ReservoirConfig& rc) {
  Vec phi = bin_phases(mask, rc);
  CVec ph(rc.modes);
  for (int m = 0; m < rc.modes; ++m) ph(m) = std::polar(1.0, phi(m));
  CMat u = rc.mixers[0];
  for (int k = 1; k <= rc.layers; ++k) u = rc.mixers[k] * (ph.asDiagonal() * u);
  return {u};
}

MinMaxScaler MinMaxScaler::fit(const Mat& x, double lo, double hi) {
  if (x.rows() == 0) throw std::invalid_argument("MinMaxScaler: empty matrix");
  return {x.colwise().minCoeff().transpose(), x.colwise().maxCoeff().transpose(), lo, hi};
}

Mat MinMaxScaler::transform(const Mat& x) const {
  Mat out(x.rows(), x.cols());
  for (int j = 0; j < x.cols(); ++j) {
    double span = max(j) - min(j);
    for (int i = 0; i < x.rows(); ++i) {
      double u = span > 0 ? (x(i, j) - min(j)) / span : 0.5;
      out(i, j) = lo + (hi - lo) * u;
    }
  }
  return out;
}

}  // namespace qrc
