// Copyright 2026 The hedgefx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hedgefx/error.hpp"
#include "hedgefx/random.hpp"

namespace hedgefx {

// ceil(n^(1/3)), at least 1.
inline std::size_t default_block_length(std::size_t n) {
  auto l = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n)) - 1e-12));
  return l == 0 ? 1 : l;
}

// Moving-block bootstrap index draw: ceil(n / block) blocks of consecutive
// indices with uniform start in [0, n - block], concatenated and cut to n.
inline std::vector<std::size_t> moving_block_indices(std::size_t n, std::size_t block, Rng& rng) {
  if (block == 0 || block > n) {
    throw invalid_argument("resample", "block length " + std::to_string(block) + " outside [1, " +
                                           std::to_string(n) + "]");
  }
  std::vector<std::size_t> idx;
  idx.reserve(n + block);
  const std::size_t starts = n - block + 1;
  while (idx.size() < n) {
    const std::size_t s = static_cast<std::size_t>(rng.below(starts));
    for (std::size_t k = 0; k < block && idx.size() < n; ++k) idx.push_back(s + k);
  }
  return idx;
}

}  // namespace hedgefx
