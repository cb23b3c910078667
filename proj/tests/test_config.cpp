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

#include "hedgefx/config.hpp"

#include <gtest/gtest.h>

#include <string>

#include <json.hpp>

#include "hedgefx/error.hpp"
#include "test_util.hpp"

namespace hedgefx::pipeline {
namespace {

using nlohmann::json;

json minimal_episode() {
  return {{"country", "Turkey"},
          {"crisis_date", "2018-08-13"},
          {"window_start", "2016-01"},
          {"window_end", "2020-12"},
          {"residency", json::array({"local", "foreign"})},
          {"series_manifest", "data/manifest.json"},
          {"feature_schema", {{"base_features", json::array({"m2", "rate"})}}}};
}

json minimal_config() { return {{"seed", 11}, {"episodes", json::array({minimal_episode()})}}; }

RunConfig parse(const json& doc) { return parse_config(doc.dump(), "/cfg"); }

// Expects a config error whose message contains `fragment`.
void expect_config_error(const json& doc, const std::string& fragment) {
  try {
    parse(doc);
    FAIL() << "accepted: " << doc.dump();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig) << e.what();
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(Config, MinimalDefaults) {
  const auto c = parse(minimal_config());
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.bootstrap.replications, 1000u);
  EXPECT_EQ(c.attribution.replications, 1000u);
  EXPECT_TRUE(c.cv.enabled);
  EXPECT_FALSE(c.output_dir.has_value());
  ASSERT_EQ(c.episodes.size(), 1u);
  const auto& e = c.episodes[0];
  EXPECT_EQ(e.crisis_month, MonthStamp(2018, 8));
  EXPECT_EQ(e.crisis_date, "2018-08-13");
  ASSERT_EQ(e.residency.size(), 2u);
  EXPECT_EQ(e.residency[0], hedge::Residency::kForeign);
  EXPECT_EQ(e.residency[1], hedge::Residency::kLocal);
  EXPECT_EQ(e.series_manifest, std::filesystem::path("/cfg/data/manifest.json"));
  EXPECT_EQ(&c.bootstrap_for(e), &c.bootstrap);
}

TEST(Config, EpisodeBootstrapOverridesRunLevel) {
  auto doc = minimal_config();
  doc["bootstrap"] = {{"replications", 500}, {"seed", 3}};
  doc["episodes"][0]["bootstrap"] = {{"block_length", 4}};
  const auto c = parse(doc);
  const auto& b = c.bootstrap_for(c.episodes[0]);
  EXPECT_EQ(b.replications, 500u);
  EXPECT_EQ(b.block_length, 4u);
  EXPECT_EQ(b.seed, 3u);
}

TEST(Config, EmptyResidencyRejected) {
  auto doc = minimal_config();
  doc["episodes"][0]["residency"] = json::array();
  expect_config_error(doc, "residency is empty");
}

TEST(Config, ResidencyValues) {
  auto doc = minimal_config();
  doc["episodes"][0]["residency"] = json::array({"tourist"});
  expect_config_error(doc, "tourist");
  doc["episodes"][0]["residency"] = json::array({"local", "local"});
  expect_config_error(doc, "twice");
}

TEST(Config, WindowOrdering) {
  auto doc = minimal_config();
  doc["episodes"][0]["window_start"] = "2018-09";
  expect_config_error(doc, "must precede");
  // Same month is fine when the crisis falls after the first day.
  doc["episodes"][0]["window_start"] = "2018-08";
  EXPECT_NO_THROW(parse(doc));
  doc["episodes"][0]["crisis_date"] = "2018-08";
  expect_config_error(doc, "must precede");
  doc = minimal_config();
  doc["episodes"][0]["window_end"] = "2018-07";
  expect_config_error(doc, "after window_end");
  doc["episodes"][0]["window_end"] = "2018-13";
  expect_config_error(doc, "malformed date");
}

TEST(Config, UnknownKeysRejected) {
  auto doc = minimal_config();
  doc["bootstrp"] = {{"replications", 200}};
  expect_config_error(doc, "unknown key 'bootstrp'");
  doc = minimal_config();
  doc["episodes"][0]["feature_schema"]["lagz"] = json::object();
  expect_config_error(doc, "unknown key 'lagz'");
}

TEST(Config, ScalarValidation) {
  auto doc = minimal_config();
  doc["schema_version"] = 2;
  expect_config_error(doc, "schema_version");
  doc = minimal_config();
  doc["criterion"] = "hqic";
  expect_config_error(doc, "criterion");
  doc = minimal_config();
  doc["bootstrap"] = {{"replications", 50}};
  expect_config_error(doc, "at least 100");
  doc = minimal_config();
  doc["cv"] = {{"initial_window", 5}};
  expect_config_error(doc, "initial_window");
  doc = minimal_config();
  doc["seed"] = "eleven";
  expect_config_error(doc, "seed");
  expect_config_error(json::array(), "");
  EXPECT_THROW(parse_config("{not json", "/"), Error);
}

TEST(Config, EpisodesValidation) {
  auto doc = minimal_config();
  doc["episodes"] = json::array();
  expect_config_error(doc, "non-empty");
  doc = minimal_config();
  doc["episodes"].push_back(minimal_episode());
  expect_config_error(doc, "listed twice");
}

TEST(Config, QuantileOverride) {
  auto doc = minimal_config();
  doc["episodes"][0]["quantile_override"] = json::array({0.1, 0.5, 0.9});
  EXPECT_EQ(parse(doc).episodes[0].quantile_override.size(), 3u);
  doc["episodes"][0]["quantile_override"] = json::array({0.5, 0.5});
  expect_config_error(doc, "strictly increasing");
  doc["episodes"][0]["quantile_override"] = json::array({0.0});
  expect_config_error(doc, "outside (0,1)");
}

TEST(Config, EndogeneityGuardRunsAtParseTime) {
  auto doc = minimal_config();
  doc["episodes"][0]["feature_schema"]["base_features"] = json::array({"m2", "equity_close"});
  expect_config_error(doc, "endogeneity guard");
  doc = minimal_config();
  doc["episodes"][0]["feature_schema"]["interactions"] = json::array({json::array({"m2", "oil"})});
  EXPECT_THROW(parse(doc), Error);
  doc["episodes"][0]["feature_schema"]["interactions"] = json::array({json::array({"m2"})});
  expect_config_error(doc, "pairs");
}

TEST(Config, FastProfileCapsReplications) {
  auto doc = minimal_config();
  doc["episodes"][0]["bootstrap"] = {{"replications", 150}};
  doc["attribution"] = {{"replications", 5000}};
  auto c = parse(doc);
  apply_fast_profile(c);
  EXPECT_EQ(c.bootstrap.replications, kFastReplications);
  EXPECT_EQ(c.episodes[0].bootstrap->replications, 150u);
  EXPECT_EQ(c.attribution.replications, kFastReplications);
}

TEST(Config, LoadResolvesAgainstFileDirectory) {
  testing::TempDir dir;
  auto doc = minimal_config();
  doc["output_dir"] = "results";
  const auto path = dir.write("sub/config.json", doc.dump());
  const auto c = load_config(path);
  EXPECT_EQ(c.source, path);
  EXPECT_EQ(*c.output_dir, dir.path() / "sub" / "results");
  EXPECT_EQ(c.episodes[0].series_manifest, dir.path() / "sub" / "data/manifest.json");
  EXPECT_EQ(c.text, doc.dump());
  try {
    load_config(dir.path() / "missing.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

}  // namespace
}  // namespace hedgefx::pipeline
