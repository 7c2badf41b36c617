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

#ifndef QRC_RNG_HPP_
#define QRC_RNG_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "qrc/types.hpp"

namespace qrc {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// 64-bit FNV-1a, chainable through `h`.
std::uint64_t fnv1a(const void* data, std::size_t bytes,
                    std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(std::string_view s);
std::string hex64(std::uint64_t h);

// Sub-seed for one pipeline stage. The derivation is frozen: changing it
// changes every stored result.
//
//   h = splitmix64(master ^ fnv1a(stage))
//   h = splitmix64(h ^ splitmix64(sample + 1))
//   h = splitmix64(h ^ splitmix64(rep + 0x9e37))
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage,
                          std::uint64_t sample = 0, std::uint64_t rep = 0);

// Haar-distributed M x M unitary (QR of a complex Ginibre matrix with the
// R-diagonal phases divided out).
CMat haar_unitary(int m, Rng& rng);

// Standard normal vector.
Vec normal_vector(int n, Rng& rng);

}  // namespace qrc

#endif  // QRC_RNG_HPP_
