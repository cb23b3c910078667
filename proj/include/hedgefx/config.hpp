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

// Run configuration: one JSON document describing the crisis episodes to
// analyse and the shared inference settings.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hedgefx/copula.hpp"
#include "hedgefx/hedge.hpp"
#include "hedgefx/month.hpp"
#include "hedgefx/qreg.hpp"

namespace hedgefx::pipeline {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr std::size_t kFastReplications = 200;

struct BootstrapConfig {
  std::size_t replications = 1000;
  std::size_t block_length = 0;  // 0 selects ceil(n^(1/3))
  std::optional<std::uint64_t> seed;  // derived from the run seed when unset
};

struct CvConfig {
  bool enabled = true;
  std::size_t initial_window = 36;
  std::size_t step = 6;
  bool crisis_aware = false;
};

struct AttributionConfig {
  bool enabled = true;
  std::size_t replications = 1000;  // bootstrap refits for rank stability
  std::size_t block_length = 0;
};

struct Episode {
  std::string country;
  std::string crisis_date;  // as written, day precision allowed
  MonthStamp crisis_month;
  MonthStamp window_start;
  MonthStamp window_end;
  std::vector<hedge::Residency> residency;
  std::filesystem::path series_manifest;  // resolved against the config's directory
  qreg::FeatureSchema feature_schema;
  std::vector<double> quantile_override;  // regression quantiles; empty uses the triplet
  std::optional<BootstrapConfig> bootstrap;  // overrides the run-level setting
};

struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output_dir;  // resolved against the config's directory
  copula::Criterion criterion = copula::Criterion::kAic;
  BootstrapConfig bootstrap;
  CvConfig cv;
  AttributionConfig attribution;
  std::vector<Episode> episodes;

  std::filesystem::path source;  // config file, empty for in-memory configs
  std::string text;              // raw config text, part of the provenance hash

  const BootstrapConfig& bootstrap_for(const Episode& e) const { return e.bootstrap ? *e.bootstrap : bootstrap; }
};

// Parses and validates; every problem is a config error naming the field.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

// Caps bootstrap and stability replications at kFastReplications.
void apply_fast_profile(RunConfig& config);

}  // namespace hedgefx::pipeline
