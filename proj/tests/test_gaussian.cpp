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

#include "catch_amalgamated.hpp"
#include "qrc/gaussian.hpp"
#include "qrc/rng.hpp"

using namespace qrc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

GaussianState random_state(int m, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec r(m), th(m);
  CVec a(m);
  for (int i = 0; i < m; ++i) {
    r(i) = u(rng);
    th(i) = 6.283185307179586 * u(rng);
    a(i) = cplx(u(rng) - 0.5, u(rng) - 0.5);
  }
  GaussianState s = displace(make_squeezed_vacuum(r, th), a);
  s = apply_unitary(s, PassiveUnitary{haar_unitary(m, rng)});
  Vec eta(m);
  for (int i = 0; i < m; ++i) eta(i) = 0.3 + 0.7 * u(rng);
  return apply_loss(s, eta);
}

}  // namespace

TEST_CASE("single-mode photon statistics match closed forms") {
  const double r = 0.7, nbar = 1.3;
  const cplx alpha(0.8, -0.4);
  auto sq = photon_moments(make_squeezed_vacuum(Vec::Constant(1, r)));
  double n = std::sinh(r) * std::sinh(r);
  CHECK_THAT(sq.mu(0), WithinAbs(n, 1e-12));
  CHECK_THAT(sq.sigma(0, 0), WithinAbs(2 * n * (n + 1), 1e-10));

  auto th = photon_moments(make_thermal(Vec::Constant(1, nbar)));
  CHECK_THAT(th.sigma(0, 0), WithinAbs(nbar * (1 + nbar), 1e-10));

  auto co = photon_moments(make_coherent(CVec::Constant(1, alpha)));
  CHECK_THAT(co.sigma(0, 0), WithinAbs(std::norm(alpha), 1e-10));
  CHECK_THAT(co.mu(0), WithinAbs(std::norm(alpha), 1e-12));

  auto vac = photon_moments(vacuum(3));
  CHECK(vac.mu.isZero(0.0));
  CHECK(vac.sigma.isZero(0.0));
}

TEST_CASE("supercontinuum covariance is diag(mu) + g mu mu^T") {
  CVec a(3);
  a << cplx(1, 0), cplx(0.5, 0.5), cplx(0, 2);
  auto m = photon_moments(make_supercontinuum(a, 0.6));
  Vec mu = a.cwiseAbs2();
  Mat expect = Mat(mu.asDiagonal()) + 0.6 * mu * mu.transpose();
  CHECK((m.sigma - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("passive unitary conserves total photon number; loss scales it") {
  Rng rng(3);
  GaussianState s = displace(make_squeezed_vacuum(Vec::Constant(4, 0.5)), CVec::Constant(4, cplx(0.3, 0.1)));
  double total = photon_moments(s).mu.sum();
  GaussianState t = apply_unitary(s, PassiveUnitary{haar_unitary(4, rng)});
  CHECK_THAT(photon_moments(t).mu.sum(), WithinRel(total, 1e-12));
  GaussianState l = apply_loss(t, Vec::Constant(4, 0.4));
  CHECK_THAT(photon_moments(l).mu.sum(), WithinRel(0.4 * total, 1e-12));
}

TEST_CASE("two-mode squeezing correlations from a 50:50 splitter") {
  // Opposite squeezing into a balanced splitter gives perfectly correlated counts.
  Vec r = Vec::Constant(2, 0.6), th(2);
  th << 0.0, 3.141592653589793;
  CMat bs(2, 2);
  bs << 1, 1, 1, -1;
  bs /= std::sqrt(2.0);
  auto m = photon_moments(apply_unitary(make_squeezed_vacuum(r, th), PassiveUnitary{bs}));
  CHECK_THAT(m.mu(0), WithinAbs(m.mu(1), 1e-12));
  CHECK_THAT(m.sigma(0, 1), WithinAbs(m.sigma(0, 0), 1e-10));
  CHECK_THAT(m.sigma(0, 0), WithinAbs(m.mu(0) * (1 + m.mu(0)), 1e-10));
}

TEST_CASE("photon covariance is symmetric and PSD for random states") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    GaussianState s = random_state(1 + trial % 5, rng);
    check_state(s);
    CHECK(physicality_margin(s) > -1e-10);
    auto m = photon_moments(s);
    CHECK((m.sigma - m.sigma.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat> es(m.sigma);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("x quadrature is the squeezed one") {
  const double r = 0.5;
  Mat q = quadrature_covariance(make_squeezed_vacuum(Vec::Constant(1, r)));
  CHECK_THAT(q(0, 0), WithinAbs(0.5 * std::exp(-2 * r), 1e-12));
  CHECK_THAT(q(1, 1), WithinAbs(0.5 * std::exp(2 * r), 1e-12));
}

TEST_CASE("Williamson / Bloch-Messiah recovers squeezing and purity") {
  Vec r(3);
  r << 1.0, 0.5, 0.0;
  Rng rng(2);
  GaussianState s = apply_unitary(make_squeezed_vacuum(r), PassiveUnitary{haar_unitary(3, rng)});
  auto sp = williamson_bloch_messiah(s);
  CHECK_THAT(sp.purity, WithinAbs(1.0, 1e-9));
  CHECK_THAT(sp.r(0), WithinAbs(1.0, 1e-8));
  CHECK_THAT(sp.r(1), WithinAbs(0.5, 1e-8));
  CHECK_THAT(sp.r(2), WithinAbs(0.0, 1e-8));
  CHECK(sp.supermodes(0.1) == 2);

  auto th = williamson_bloch_messiah(make_thermal(Vec::Constant(1, 2.0)));
  CHECK_THAT(th.purity, WithinAbs(1.0 / 5.0, 1e-10));
  CHECK_THAT(th.nu(0), WithinAbs(2.5, 1e-10));
}

TEST_CASE("contract violations") {
  CHECK_THROWS_AS(make_squeezed_vacuum(Vec::Constant(1, -0.1)), std::domain_error);
  CHECK_THROWS_AS(make_thermal(Vec::Constant(1, -1.0)), std::domain_error);
  CHECK_THROWS_AS(apply_loss(vacuum(2), Vec::Constant(2, 1.5)), std::domain_error);
  CMat bad = CMat::Identity(2, 2);
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(apply_unitary(vacuum(2), PassiveUnitary{bad}), ContractViolation);
  CHECK_THROWS_AS(source_kind_from_string("laser"), std::invalid_argument);
  CHECK(source_kind_from_string(to_string(SourceKind::thermal)) == SourceKind::thermal);
}
