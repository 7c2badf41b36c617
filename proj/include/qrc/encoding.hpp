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

// Feature vector -> spectral phase mask -> data-dependent passive unitary.

#ifndef QRC_ENCODING_HPP_
#define QRC_ENCODING_HPP_

#include <cstdint>
#include <vector>

#include "qrc/gaussian.hpp"

namespace qrc {

inline constexpr int kSlmPixels = 1920;

// Raised cosine over [lo, hi) with value 1 at the window center and 0.5 at
// its edges; 0.5 outside the window.
Vec window_compensation(int pixels, int lo, int hi);
// Raised cosine over the whole pixel row, 1 at the center and 0.5 at the ends.
Vec row_compensation(int pixels);

struct EncoderConfig {
  int d = 2;
  int pixels = kSlmPixels;
  double sigma_g = 8.0;   // Gaussian filter std, pixels
  double chirp = 0.0;     // radians / pixel^2, set by defaults()
  double scale = 3.141592653589793;  // radians per feature unit
  Vec compensation;       // length `pixels`, entries in (0, 1]
  int window_lo = 576;    // pump support [window_lo, window_hi)
  int window_hi = 1344;
  int control_bins = 250; // resolvable phase bins across the row

  // d features, 40% central window, chirp spanning 20 pi across the window.
  static EncoderConfig defaults(int d);
  int pixels_per_feature() const { return pixels / d; }
  double chirp_center() const { return 0.5 * (window_lo + window_hi - 1); }
  void validate() const;
};

struct PhaseMask {
  Vec values;
  int d = 0;
  int p = 0;
  double sigma_g = 0.0;
  double chirp = 0.0;
  double scale = 0.0;
};

// mask = scale * smooth(compensation .* replicate(x)) + chirp * (k - k0)^2
PhaseMask encode_features(const Vec& x, const EncoderConfig& cfg);

int effective_mode_count(const EncoderConfig& cfg);

// Same-length Gaussian filter with nearest-edge extension.
Vec gaussian_smooth(const Vec& v, double sigma);

struct ReservoirConfig {
  int modes = 32;
  int layers = 2;
  std::uint64_t seed = 1;
  std::vector<CMat> mixers;          // W_1 .. W_{L+1}
  std::vector<int> mode_of_pixel;    // -1 outside the pump window
  Vec eta;                           // per-mode transmission after U
  SourceSpec source;

  void validate() const;
};

// Haar mixers from `seed`; pump-window pixels split into `modes` equal bins.
ReservoirConfig make_reservoir(int modes, int layers, std::uint64_t seed,
                               const EncoderConfig& enc, double transmission);

// Mean mask value within each mode's pixel bin.
Vec bin_phases(const PhaseMask& mask, const ReservoirConfig& rc);

// U = W_{L+1} prod_{k=L..1} diag(exp(i phi)) W_k
PassiveUnitary build_unitary(const PhaseMask& mask, const ReservoirConfig& rc);

// Per-feature affine map of the dataset range onto [lo, hi].
struct MinMaxScaler {
  Vec min;
  Vec max;
  double lo = -1.0;
  double hi = 1.0;

  static MinMaxScaler fit(const Mat& x, double lo, double hi);
  Mat transform(const Mat& x) const;
};

}  // namespace qrc

#endif  // QRC_ENCODING_HPP_
