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

// Exercises the shared library through its C header only.

#include "hedgefx/hedgefx.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "test_util.hpp"

namespace {

using hedgefx::testing::read_file;
using hedgefx::testing::TempDir;

const std::string kFixtures = HEDGEFX_FIXTURE_DIR;

hfx_run_options quiet_options() {
  hfx_run_options o;
  hfx_run_options_init(&o);
  o.fast = 1;
  o.attribution = 0;
  o.write_outputs = 0;
  return o;
}

TEST(CApi, Version) { EXPECT_STREQ(hfx_version(), "1.0.0"); }

TEST(CApi, Primitives) {
  double out = 0.0;
  ASSERT_EQ(hfx_real_return_domestic(0.10, 0.05, &out), HFX_OK);
  EXPECT_NEAR(out, 1.10 / 1.05 - 1.0, 1e-15);
  ASSERT_EQ(hfx_real_return_foreign(0.10, 10.0, 12.0, 0.05, &out), HFX_OK);
  EXPECT_NEAR(out, 1.10 * (10.0 / 12.0) / 1.05 - 1.0, 1e-15);
  ASSERT_EQ(hfx_clayton_lower_tail(2.0, &out), HFX_OK);
  EXPECT_NEAR(out, std::pow(2.0, -0.5), 1e-15);
  ASSERT_EQ(hfx_check_loss(-2.0, 0.25, &out), HFX_OK);
  EXPECT_DOUBLE_EQ(out, 1.5);

  const std::vector<double> loss = {0.01, 0.03, 0.02, 0.05, 0.04};
  std::vector<double> net(loss.size(), 0.02);
  ASSERT_EQ(hfx_hedge_effectiveness(net.data(), loss.data(), loss.size(), &out), HFX_OK);
  EXPECT_DOUBLE_EQ(out, 1.0);

  std::vector<double> r(75);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<double>((i * 37) % 75);
  ASSERT_EQ(hfx_min_tail_quantile(r.data(), r.size(), 6, &out), HFX_OK);
  EXPECT_DOUBLE_EQ(out, 0.08);
  ASSERT_EQ(hfx_empirical_quantile(r.data(), r.size(), 0.08, &out), HFX_OK);
  EXPECT_DOUBLE_EQ(out, 5.0);
}

TEST(CApi, ErrorsCarryStatusAndMessage) {
  double out = 0.0;
  const double one = 1.0;
  EXPECT_EQ(hfx_hedge_effectiveness(&one, &one, 1, &out), HFX_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::strlen(hfx_last_error()), 0u);
  EXPECT_EQ(hfx_hedge_effectiveness(nullptr, nullptr, 3, &out), HFX_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(hfx_check_loss(1.0, 0.5, &out), HFX_OK);
  EXPECT_STREQ(hfx_last_error(), "");

  hfx_run* run = reinterpret_cast<hfx_run*>(0x1);
  const auto o = quiet_options();
  EXPECT_EQ(hfx_run_create("/nonexistent/config.json", &o, &run), HFX_ERR_CONFIG);
  EXPECT_EQ(run, nullptr);
  EXPECT_NE(std::string(hfx_last_error()).find("cannot read"), std::string::npos);
  EXPECT_EQ(hfx_run_create(nullptr, &o, &run), HFX_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(hfx_run_create("x", &o, nullptr), HFX_ERR_INVALID_ARGUMENT);

  TempDir dir;
  const auto bad = dir.write("config.json", R"({"episodes": [], "seed": 1})");
  EXPECT_EQ(hfx_validate_config(bad.c_str(), nullptr), HFX_ERR_CONFIG);
  EXPECT_EQ(hfx_fixture_generate("mystery", 75, 1, 2.0, dir.path().c_str()), HFX_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(hfx_fixture_generate("independent", 10, 1, 2.0, dir.path().c_str()), HFX_ERR_INVALID_ARGUMENT);

  // Null handles are tolerated by accessors.
  EXPECT_EQ(hfx_run_report_count(nullptr), 0u);
  EXPECT_EQ(hfx_run_diagnostic(nullptr, 0), nullptr);
  hfx_run_free(nullptr);
  hfx_sweep_free(nullptr);
}

TEST(CApi, ValidateShippedFixture) {
  size_t episodes = 0;
  ASSERT_EQ(hfx_validate_config((kFixtures + "/turkey_like/config.json").c_str(), &episodes), HFX_OK)
      << hfx_last_error();
  EXPECT_EQ(episodes, 1u);
}

TEST(CApi, RunMatchesGolden) {
  TempDir dir;
  auto o = quiet_options();
  o.write_outputs = 1;
  o.output_dir = dir.path().c_str();
  hfx_run* run = nullptr;
  ASSERT_EQ(hfx_run_create((kFixtures + "/turkey_like/config.json").c_str(), &o, &run), HFX_OK)
      << hfx_last_error();
  ASSERT_EQ(hfx_run_report_count(run), 2u);
  hfx_report_row row;
  ASSERT_EQ(hfx_run_report(run, 0, &row), HFX_OK);
  EXPECT_STREQ(row.country, "Turkey");
  EXPECT_STREQ(row.residents, "Foreign");
  EXPECT_STREQ(row.crisis_date, "2018-08-13");
  EXPECT_STREQ(row.diagnostic, "");
  EXPECT_EQ(row.hedge_effectiveness_pct, 0.0);
  EXPECT_NEAR(row.erosion_pct, 4.12, 1e-9);
  EXPECT_NEAR(row.net_real_pct, -0.38, 1e-9);
  EXPECT_NEAR(row.tail_dependence, 0.34, 0.005);
  EXPECT_LE(row.tail_dependence_lo, row.tail_dependence_hi);
  EXPECT_EQ(row.observations, 75u);
  EXPECT_EQ(hfx_run_report(run, 2, &row), HFX_ERR_INVALID_ARGUMENT);

  double lo = 0, mid = 0, hi = 0;
  ASSERT_EQ(hfx_run_triplet(run, &lo, &mid, &hi), HFX_OK);
  EXPECT_EQ(lo, 0.08);
  EXPECT_EQ(mid, 0.5);
  EXPECT_EQ(hi, 0.92);

  const std::string golden = read_file(kFixtures + "/turkey_like/golden/report.csv");
  EXPECT_EQ(hfx_run_report_csv(run), golden);
  EXPECT_EQ(read_file(dir.path() / "report.csv"), golden);
  EXPECT_EQ(std::string(hfx_run_output_dir(run)), dir.path().string());
  EXPECT_GT(hfx_run_diagnostic_count(run), 0u);
  hfx_run_free(run);
}

TEST(CApi, Sweep) {
  TempDir dir;
  auto o = quiet_options();
  o.write_outputs = 1;
  o.output_dir = dir.path().c_str();
  const double taus[] = {0.10, 0.9};
  hfx_sweep* sweep = nullptr;
  ASSERT_EQ(hfx_sweep_create((kFixtures + "/anti_hedge/config.json").c_str(), taus, 2, &o, &sweep), HFX_OK)
      << hfx_last_error();
  ASSERT_EQ(hfx_sweep_row_count(sweep), 4u);
  hfx_sweep_row row;
  ASSERT_EQ(hfx_sweep_row_at(sweep, 0, &row), HFX_OK);
  EXPECT_EQ(row.feasible, 1);
  EXPECT_EQ(row.hedge_effectiveness_pct, 0.0);
  ASSERT_EQ(hfx_sweep_row_at(sweep, 3, &row), HFX_OK);
  EXPECT_EQ(row.feasible, 0);
  EXPECT_NE(std::string(row.reason).find("left-tail"), std::string::npos);
  EXPECT_FALSE(read_file(dir.path() / "sweep.csv").empty());
  hfx_sweep_free(sweep);
  EXPECT_EQ(hfx_sweep_create((kFixtures + "/anti_hedge/config.json").c_str(), nullptr, 2, &o, &sweep),
            HFX_ERR_INVALID_ARGUMENT);
}

TEST(CApi, FixtureGeneration) {
  TempDir a, b;
  ASSERT_EQ(hfx_fixture_generate("clayton_coupled", 40, 9, 3.0, a.path().c_str()), HFX_OK);
  ASSERT_EQ(hfx_fixture_generate("clayton_coupled", 40, 9, 3.0, b.path().c_str()), HFX_OK);
  EXPECT_EQ(read_file(a.path() / "index.csv"), read_file(b.path() / "index.csv"));
  EXPECT_EQ(read_file(a.path() / "config.json"), read_file(b.path() / "config.json"));
}

}  // namespace
