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

// Synthetic episode fixtures: CSV series, a series manifest and a run
// config realizing a named dependence regime between equity returns and
// purchasing-power loss. Output is a pure function of (kind, options).

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace hedgefx::fixture {

enum class Kind {
  kPerfectHedge,    // nominal = loss + constant for both residencies
  kAntiHedge,       // foreign net = 2 x foreign loss deviations
  kClaytonCoupled,  // (equity, loss) ranks follow a Clayton copula
  kIndependent,     // independent ranks
  kTurkeyLike,      // calibrated to HE 0, erosion 4.12/2.05, net -0.38/1.69, lambda 0.34
};

const char* to_string(Kind kind);
std::optional<Kind> parse_kind(const std::string& text);

inline constexpr std::size_t kMinObservations = 24;

struct Options {
  std::size_t n = 75;  // months in the analysis window
  std::uint64_t seed = 7;
  double theta = 2.0;  // Clayton parameter for kClaytonCoupled
};

struct Paths {
  std::filesystem::path dir;
  std::filesystem::path manifest;
  std::filesystem::path config;
};

// Writes index.csv, fx_daily.csv, cpi_official.csv, cpi_proxy.csv, the
// feature series, manifest.json and config.json into `out_dir`.
Paths generate(Kind kind, const Options& options, const std::filesystem::path& out_dir);

}  // namespace hedgefx::fixture
