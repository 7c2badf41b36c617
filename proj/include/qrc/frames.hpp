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

// Simulated camera acquisition and the pixel-randomization procedures.

#ifndef QRC_FRAMES_HPP_
#define QRC_FRAMES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrc/gaussian.hpp"

namespace qrc {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class SamplingMode { exact_small, classical_mixture, estimator_asymptotic };

std::string to_string(SamplingMode m);
SamplingMode sampling_mode_from_string(const std::string& s);

struct DetectionModel {
  Vec efficiency;                 // per pixel
  double readout_sigma = 0.05;    // counts
  std::vector<int> mode_of_pixel; // -1 for pixels that see no mode

  int pixels() const { return static_cast<int>(efficiency.size()); }
  // Modes land on the central `modes` pixels of a `pixels`-wide sensor.
  static DetectionModel centered(int modes, int pixels, double efficiency, double readout_sigma);
  void validate(int modes) const;
};

struct FrameSet {
  RowMat frames;  // F x P
  std::uint64_t seed = 0;

  long num_frames() const { return frames.rows(); }
  int num_pixels() const { return static_cast<int>(frames.cols()); }
};

// (mu_hat, Sigma_hat) without stored frames.
struct MomentEstimate {
  Vec mu;
  Mat sigma;
  long frames = 0;
  std::uint64_t seed = 0;
};

// Everything the light sees for one sample: input, interferometer, loss.
struct ReservoirRun {
  SourceSpec source;
  PassiveUnitary U;
  Vec eta;
};

struct Acquisition {
  SamplingMode mode = SamplingMode::classical_mixture;
  std::optional<FrameSet> frames;        // exact_small, classical_mixture
  std::optional<MomentEstimate> estimate; // estimator_asymptotic
};

// Exact photon-count moments at the pixels, including detection efficiency
// and readout variance.
PhotonMoments pixel_moments(const ReservoirRun& run, const DetectionModel& det);
// Expected detected photons over F frames (readout noise excluded).
double expected_total(const ReservoirRun& run, const DetectionModel& det, long frames);

Acquisition sample_frames(const ReservoirRun& run, const DetectionModel& det, long frames,
                          SamplingMode mode, std::uint64_t seed);

// Per-frame variance of each covariance-estimate element: F * Var(Sigma_hat_ij)
// as F grows, from the fourth-order count moments at the pixels.
Mat covariance_estimate_variance(const ReservoirRun& run, const DetectionModel& det);

// Draw (mu_hat, Sigma_hat) from their large-F law around exact moments:
// mu_hat ~ Normal(mu, Sigma/F), Sigma_hat ~ Wishart(Sigma, F-1)/(F-1).
MomentEstimate sample_estimator(const PhotonMoments& exact, long frames, std::uint64_t seed);
// As above, with each element's deviation from Sigma rescaled so that its
// variance is element_variance / F instead of the Wishart value.
MomentEstimate sample_estimator(const PhotonMoments& exact, const Mat& element_variance, long frames,
                                std::uint64_t seed);

std::vector<int> pixel_range(int lo, int hi);
// Pixel set complement within [0, pixels).
std::vector<int> complement(const std::vector<int>& set, int pixels);

FrameSet erase_pixels_poisson(const FrameSet& fs, const std::vector<int>& window, std::uint64_t seed);
FrameSet restrict_wavelengths(const FrameSet& fs, const std::vector<int>& keep, std::uint64_t seed);
// Large-F counterparts acting on an estimate: the erased pixels become
// independent Poisson series with the estimated means.
MomentEstimate erase_pixels_poisson(const MomentEstimate& est, const std::vector<int>& window,
                                    std::uint64_t seed);
MomentEstimate restrict_wavelengths(const MomentEstimate& est, const std::vector<int>& keep,
                                    std::uint64_t seed);

double total_counts(const FrameSet& fs);

}  // namespace qrc

#endif  // QRC_FRAMES_HPP_
