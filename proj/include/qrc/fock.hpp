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

// Truncated-Fock reference simulator for small Gaussian circuits.
//
// The circuit is fixed: per-mode squeezing, then displacement, then a passive
// unitary, then loss. Thermal inputs are purified with an ancilla (a two-mode
// squeezed vacuum built from two single-mode squeezers and a 50:50 splitter).
// The state vector lives in the span of Fock states with total photon number
// <= cutoff; passive optics preserves that number, so only the initial product
// state is truncated.

#ifndef QRC_FOCK_HPP_
#define QRC_FOCK_HPP_

#include <vector>

#include "qrc/gaussian.hpp"
#include "qrc/rng.hpp"

namespace qrc {

struct FockRecipe {
  Vec r;       // squeezing per mode
  Vec theta;   // squeezing angle per mode; empty means 0
  CVec alpha;  // displacement applied after squeezing; empty means 0
  Vec nbar;    // thermal occupation; empty means 0. Thermal modes take no r or alpha.
  CMat U;      // passive unitary; empty means identity
  Vec eta;     // transmissivity after U; empty means 1

  int modes() const;
  // The same circuit evaluated on the Gaussian side.
  GaussianState gaussian() const;
};

// Joint photon-number distribution over the system modes before loss.
struct FockDistribution {
  std::vector<std::vector<int>> occupations;
  Vec prob;
  Vec eta;
  double deficit = 0.0;
  int cutoff = 0;
};

// Probability lost by truncating the initial product state at `cutoff`.
double fock_norm_deficit(const FockRecipe& recipe, int cutoff);
// Smallest cutoff with deficit <= max_deficit. Throws CutoffTooSmall past max_cutoff.
int choose_cutoff(const FockRecipe& recipe, double max_deficit, int max_cutoff = 120);

FockDistribution fock_oracle_distribution(const FockRecipe& recipe, int cutoff,
                                          double max_deficit = 1e-10);
// Moments after loss. Loss acts on the number distribution by binomial
// thinning, which is what a beamsplitter to a traced-out vacuum mode does.
PhotonMoments fock_oracle_moments(const FockRecipe& recipe, int cutoff,
                                  double max_deficit = 1e-10);
// Purity of the reduced system state; loss is modeled with explicit ancilla
// modes and a partial trace. Intended for one or two system modes.
double fock_oracle_purity(const FockRecipe& recipe, int cutoff, double max_deficit = 1e-10);

// Random circuits (M <= max_modes, r <= r_max, Haar U, eta in [eta_min, 1],
// |alpha| <= alpha_max) compared between photon_moments and the Fock oracle.
// The error of one circuit is max|analytic - oracle| / max|analytic| over
// the entries of mu and Sigma.
struct OracleCheckOptions {
  int configs = 100;
  std::uint64_t seed = 1;
  int max_modes = 3;
  double r_max = 0.8;
  double alpha_max = 1.0;
  double eta_min = 0.5;
  double max_deficit = 1e-13;
};

struct OracleCheck {
  int configs = 0;
  double worst = 0.0;
  int worst_index = -1;
  std::vector<double> errors;
  std::vector<int> cutoffs;
};

FockRecipe random_recipe(int modes, const OracleCheckOptions& opt, Rng& rng);
OracleCheck check_moments_against_oracle(const OracleCheckOptions& opt);

}  // namespace qrc

#endif  // QRC_FOCK_HPP_
