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
#include <numbers>

#include "catch_amalgamated.hpp"
#include "qrc/encoding.hpp"
#include "qrc/gaussian.hpp"
#include "qrc/rng.hpp"

using namespace qrc;
using Catch::Matchers::WithinAbs;

namespace {

double unitarity_error(const CMat& u) {
  return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("twelve features get 160 pixels each", "[encoding]") {
  auto cfg = EncoderConfig::defaults(12);
  CHECK(cfg.pixels_per_feature() == 160);
  Vec x = Vec::LinSpaced(12, 0.0, 1.0);
  auto m = encode_features(x, cfg);
  CHECK(m.p == 160);
  CHECK(m.values.size() == kSlmPixels);
}

TEST_CASE("zero input leaves only the chirp", "[encoding]") {
  auto cfg = EncoderConfig::defaults(4);
  auto m = encode_features(Vec::Zero(4), cfg);
  double k0 = cfg.chirp_center();
  for (int k = 0; k < cfg.pixels; k += 37)
    CHECK_THAT(m.values(k), WithinAbs(cfg.chirp * (k - k0) * (k - k0), 1e-12));
}

TEST_CASE("chirp spans 20 pi across the pump window", "[encoding]") {
  auto cfg = EncoderConfig::defaults(2);
  auto m = encode_features(Vec::Zero(2), cfg);
  double k0 = cfg.chirp_center();
  double edge = cfg.chirp * (cfg.window_lo - k0) * (cfg.window_lo - k0);
  CHECK_THAT(edge, WithinAbs(20.0 * std::numbers::pi, 0.2));
}

TEST_CASE("hundred features pad with the last feature", "[encoding]") {
  auto cfg = EncoderConfig::defaults(100);
  CHECK(cfg.pixels_per_feature() == 19);
  cfg.sigma_g = 0.0;
  cfg.chirp = 0.0;
  cfg.compensation = Vec::Ones(cfg.pixels);
  Vec x = Vec::LinSpaced(100, 0.0, 0.99);
  auto m = encode_features(x, cfg);
  for (int k = 1900; k < 1920; ++k) CHECK_THAT(m.values(k), WithinAbs(cfg.scale * 0.99, 1e-12));
  CHECK_THAT(m.values(0), WithinAbs(0.0, 1e-12));
  CHECK_THAT(m.values(19), WithinAbs(cfg.scale * 0.01, 1e-12));
}

TEST_CASE("smoothing preserves constants and total mass", "[encoding]") {
  Vec c = Vec::Constant(300, 2.5);
  CHECK((gaussian_smooth(c, 8.0) - c).cwiseAbs().maxCoeff() < 1e-12);
  Vec spike = Vec::Zero(300);
  spike(150) = 1.0;
  Vec s = gaussian_smooth(spike, 8.0);
  CHECK_THAT(s.sum(), WithinAbs(1.0, 1e-12));
  CHECK(s(150) == s.maxCoeff());
  CHECK_THAT(s(140), WithinAbs(s(160), 1e-15));
}

TEST_CASE("compensation is a raised cosine with floor one half", "[encoding]") {
  Vec c = window_compensation(kSlmPixels, 576, 1344);
  CHECK(c(0) == 0.5);
  CHECK(c(1919) == 0.5);
  CHECK_THAT(c(960), WithinAbs(1.0, 1e-4));
  CHECK_THAT(c(576), WithinAbs(0.5, 1e-4));
  CHECK((c.array() > 0).all());
  CHECK((c.array() <= 1).all());
  Vec r = row_compensation(kSlmPixels);
  CHECK_THAT(r(0), WithinAbs(0.5, 1e-4));
  CHECK_THAT(r(960), WithinAbs(1.0, 1e-4));
}

TEST_CASE("encoder input errors", "[encoding]") {
  auto cfg = EncoderConfig::defaults(3);
  CHECK_THROWS_AS(encode_features(Vec::Zero(2), cfg), std::invalid_argument);
  Vec bad = Vec::Zero(3);
  bad(1) = std::nan("");
  CHECK_THROWS_AS(encode_features(bad, cfg), std::invalid_argument);
  cfg.compensation(5) = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  auto w = EncoderConfig::defaults(3);
  w.window_hi = 2000;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}

TEST_CASE("effective mode count", "[encoding]") {
  auto cfg = EncoderConfig::defaults(12);
  CHECK(effective_mode_count(cfg) == 100);
  cfg.window_lo = 0;
  cfg.window_hi = 1920;
  cfg.control_bins = 1920;
  CHECK(effective_mode_count(cfg) == 1920);
  cfg.window_hi = 0;
  CHECK(effective_mode_count(cfg) == 0);
}

TEST_CASE("zero mask gives the product of the mixers", "[encoding]") {
  auto enc = EncoderConfig::defaults(2);
  auto rc = make_reservoir(8, 1, 5, enc, 0.6);
  PhaseMask m{Vec::Zero(kSlmPixels), 2, 960, 0, 0, 0};
  auto u = build_unitary(m, rc);
  CHECK((u.U - rc.mixers[1] * rc.mixers[0]).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("global phase offset changes U by a global phase only", "[encoding]") {
  auto enc = EncoderConfig::defaults(4);
  auto rc = make_reservoir(8, 2, 11, enc, 0.6);
  Vec x(4);
  x << 0.1, -0.4, 0.7, 0.2;
  auto m = encode_features(x, enc);
  const double delta = 0.37;
  auto m2 = m;
  m2.values.array() += delta;
  auto u1 = build_unitary(m, rc), u2 = build_unitary(m2, rc);
  std::complex<double> g = std::polar(1.0, delta * rc.layers);
  CHECK((u2.U - g * u1.U).cwiseAbs().maxCoeff() < 1e-12);

  SourceSpec src{SourceKind::squeezed, Vec::Constant(8, 0.5), {}, {}, 0.0};
  auto p1 = photon_moments(apply_unitary(make_state(src), u1));
  auto p2 = photon_moments(apply_unitary(make_state(src), u2));
  CHECK((p1.mu - p2.mu).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((p1.sigma - p2.sigma).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("unitarity holds over a mask fuzz suite", "[encoding][property]") {
  auto enc = EncoderConfig::defaults(2);
  auto rc = make_reservoir(8, 2, 3, enc, 0.6);
  Rng rng(99);
  std::uniform_real_distribution<double> phase(-50.0, 50.0);
  double worst = 0.0;
  PhaseMask m{Vec(kSlmPixels), 2, 960, 0, 0, 0};
  for (int t = 0; t < 10000; ++t) {
    for (int k = 0; k < kSlmPixels; ++k) m.values(k) = phase(rng);
    worst = std::max(worst, unitarity_error(build_unitary(m, rc).U));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("encoder and reservoir are deterministic", "[encoding][property]") {
  auto enc = EncoderConfig::defaults(3);
  Vec x(3);
  x << 0.3, -0.2, 0.9;
  auto a = build_unitary(encode_features(x, enc), make_reservoir(16, 2, 7, enc, 0.6));
  auto b = build_unitary(encode_features(x, enc), make_reservoir(16, 2, 7, enc, 0.6));
  CHECK(a.U == b.U);
  auto c = build_unitary(encode_features(x, enc), make_reservoir(16, 2, 8, enc, 0.6));
  CHECK(a.U != c.U);
}

TEST_CASE("U is continuous in the features", "[encoding][property]") {
  auto enc = EncoderConfig::defaults(4);
  auto rc = make_reservoir(8, 2, 21, enc, 0.6);
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    Vec x = normal_vector(4, rng) * 0.5;
    Vec dir = normal_vector(4, rng).normalized();
    auto u0 = build_unitary(encode_features(x, enc), rc).U;
    double prev = 1e300;
    for (double h : {1e-2, 1e-4, 1e-6}) {
      double d = (build_unitary(encode_features(x + h * dir, enc), rc).U - u0).norm();
      CHECK(d < prev);
      CHECK(d < 50.0 * h);
      prev = d;
    }
  }
}

TEST_CASE("distinct inputs give distinct covariances", "[encoding]") {
  auto enc = EncoderConfig::defaults(12);
  auto rc = make_reservoir(8, 2, 1, enc, 0.6);
  SourceSpec src{SourceKind::squeezed, Vec::Constant(8, 0.6), {}, {}, 0.0};
  Rng rng(12);
  std::vector<Mat> sig;
  for (int c = 0; c < 7; ++c) {
    Vec x = normal_vector(12, rng);
    sig.push_back(photon_moments(apply_unitary(make_state(src), build_unitary(encode_features(x, enc), rc))).sigma);
  }
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) CHECK((sig[i] - sig[j]).norm() > 1e-6);
}

TEST_CASE("reservoir binning covers every mode", "[encoding]") {
  auto enc = EncoderConfig::defaults(2);
  auto rc = make_reservoir(32, 2, 1, enc, 0.6);
  CHECK(rc.mixers.size() == 3);
  for (const auto& w : rc.mixers) CHECK(unitarity_error(w) < 1e-10);
  CHECK(rc.mode_of_pixel[575] == -1);
  CHECK(rc.mode_of_pixel[576] == 0);
  CHECK(rc.mode_of_pixel[1343] == 31);
  CHECK(rc.mode_of_pixel[1344] == -1);
  CHECK_THROWS_AS(make_reservoir(1000, 2, 1, enc, 0.6), std::invalid_argument);
}

TEST_CASE("min-max scaler maps the range onto [lo, hi]", "[encoding]") {
  Mat x(3, 2);
  x << 0, 5, 1, 5, 2, 5;
  auto s = MinMaxScaler::fit(x, -1.0, 1.0);
  Mat y = s.transform(x);
  CHECK(y(0, 0) == -1.0);
  CHECK(y(1, 0) == 0.0);
  CHECK(y(2, 0) == 1.0);
  CHECK(y(1, 1) == 0.0);
}
