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

// File formats.
//
// FrameSet / MomentEstimate binary (little-endian):
//   char[4]  magic "QRCF"
//   u32      version (1)
//   u32      kind (0 = frames, 1 = moment estimate)
//   u64      rows
//   u32      cols
//   u64      seed
//   u64      frames (F; equals rows for kind 0)
//   f64      rows * cols values, row-major
// A moment estimate is stored as 1 + P rows: mu, then Sigma_hat.
//
// Phase mask text:
//   qrc-mask 1
//   d <int> p <int> sigma_g <f> chirp <f> scale <f> pixels <int>
//   one value per line
//
// Selection mask text:
//   qrc-selection 1
//   k <k> features <D>
//   one kept feature index per line, ascending
//
// Model text:
//   qrc-model 1
//   kind <name> classes <L> outputs <rows of W> features <D>
//   W            (one row per line)
//   b            (one line)
//   pairs <n>    then n lines "<positive> <negative>"
//   duals <n>    then per dual: "<positive> <negative> <count>" and one line
//                per support vector "<row index> <coef>"

#ifndef QRC_IO_HPP_
#define QRC_IO_HPP_

#include <string>
#include <vector>

#include "qrc/classifiers.hpp"
#include "qrc/encoding.hpp"
#include "qrc/features.hpp"
#include "qrc/frames.hpp"

namespace qrc {

void write_frames(const std::string& path, const FrameSet& fs);
FrameSet read_frames(const std::string& path);
void write_estimate(const std::string& path, const MomentEstimate& est);
MomentEstimate read_estimate(const std::string& path);

std::string mask_to_text(const PhaseMask& mask);
PhaseMask mask_from_text(const std::string& text);
std::string selection_to_text(const SelectionMask& mask, long features);
SelectionMask selection_from_text(const std::string& text);
std::string model_to_text(const LinearModel& m);
LinearModel model_from_text(const std::string& text);

std::string read_text(const std::string& path);
// Writes through a temporary file and renames it into place.
void write_text(const std::string& path, const std::string& text);

std::string csv_escape(const std::string& s);
std::string format_double(double v);  // shortest round-trip representation

}  // namespace qrc

#endif  // QRC_IO_HPP_
