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

// Multimode Gaussian states in the (alpha, N, Mm) parameterization.
//
// Conventions used throughout the library:
//   N_ij  = <b_i^dag b_j>,  Mm_ij = <b_i b_j>,  b = a - alpha (fluctuations).
//   A passive unitary maps a_i -> sum_k U_ik a_k, so
//     alpha -> U alpha,  N -> conj(U) N U^T,  Mm -> U Mm U^T.
//   Quadratures x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)), ordered
//   (x_1..x_M, p_1..p_M). Vacuum covariance is I/2.
//   make_squeezed_vacuum puts Mm = -sinh r cosh r on the diagonal, which
//   gives Var(x) = exp(-2r)/2: the x quadrature is the squeezed one.

#ifndef QRC_GAUSSIAN_HPP_
#define QRC_GAUSSIAN_HPP_

#include <string>

#include "qrc/types.hpp"

namespace qrc {

struct GaussianState {
  CVec alpha;
  CMat N;
  CMat Mm;

  int modes() const { return static_cast<int>(alpha.size()); }
};

struct PassiveUnitary {
  CMat U;

  int modes() const { return static_cast<int>(U.rows()); }
};

enum class SourceKind { squeezed, coherent, thermal, supercontinuum };

std::string to_string(SourceKind k);
SourceKind source_kind_from_string(const std::string& s);

// Per-mode input light. Only the fields relevant to `kind` are read.
struct SourceSpec {
  SourceKind kind = SourceKind::squeezed;
  Vec r;       // squeezing parameters
  CVec alpha;  // coherent / supercontinuum amplitudes
  Vec nbar;    // thermal occupations
  double g = 0.0;

  int modes() const;
  void validate() const;
};

// Coherent amplitudes whose common intensity is Gamma-distributed per shot
// (mean 1, variance g). Not a Gaussian state.
struct SupercontinuumSource {
  CVec alpha;
  double g = 0.0;
};

struct PhotonMoments {
  Vec mu;
  Mat sigma;
};

GaussianState vacuum(int modes);
GaussianState make_squeezed_vacuum(const Vec& r);
// Squeezing r_i along angle theta_i: Mm_ii = -exp(i theta_i) sinh r_i cosh r_i.
GaussianState make_squeezed_vacuum(const Vec& r, const Vec& theta);
GaussianState make_coherent(const CVec& alpha);
GaussianState make_thermal(const Vec& nbar);
SupercontinuumSource make_supercontinuum(const CVec& alpha, double g);

// Gaussian input state for a source; supercontinuum maps to its mean-field
// coherent state.
GaussianState make_state(const SourceSpec& src);

GaussianState displace(const GaussianState& s, const CVec& beta);
GaussianState apply_unitary(const GaussianState& s, const PassiveUnitary& u);
GaussianState apply_loss(const GaussianState& s, const Vec& eta);
SupercontinuumSource apply_unitary(const SupercontinuumSource& s, const PassiveUnitary& u);
SupercontinuumSource apply_loss(const SupercontinuumSource& s, const Vec& eta);

PhotonMoments photon_moments(const GaussianState& s);
PhotonMoments photon_moments(const SupercontinuumSource& s);

// 2M x 2M real quadrature covariance, xxpp ordering.
Mat quadrature_covariance(const GaussianState& s);
// Smallest eigenvalue of sigma + i Omega / 2. Non-negative for physical states.
double physicality_margin(const GaussianState& s);
// Throws ContractViolation when Hermiticity, symmetry, diag(N) >= 0 or the
// uncertainty relation fail.
void check_state(const GaussianState& s);
void check_unitary(const PassiveUnitary& u, double tol = 1e-10);

struct SymplecticSpectrum {
  Vec nu;  // symplectic eigenvalues, ascending, >= 1/2
  Vec r;   // Bloch-Messiah squeezing per supermode, descending
  double purity = 1.0;

  int supermodes(double threshold) const;
};

SymplecticSpectrum williamson_bloch_messiah(const GaussianState& s);

}  // namespace qrc

#endif  // QRC_GAUSSIAN_HPP_
