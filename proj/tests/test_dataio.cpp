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

#include "hedgefx/dataio.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "hedgefx/error.hpp"
#include "hedgefx/random.hpp"
#include "test_util.hpp"

namespace hedgefx::dataio {
namespace {

using testing::TempDir;

MacroSeries series(const std::string& name, const std::vector<std::pair<std::string, double>>& rows,
                   SourceKind kind = SourceKind::kOfficial) {
  MacroSeries s;
  s.name = name;
  s.source_kind = kind;
  for (const auto& [m, v] : rows) s.observations.push_back({*parse_month(m), v, kind});
  return s;
}

DatedSeries daily(const std::vector<std::pair<std::string, double>>& rows) {
  DatedSeries s;
  s.name = "d";
  for (const auto& [d, v] : rows) s.observations.push_back({*parse_date(d), v});
  return s;
}

TEST(LoadSeries, AscendingAndSorted) {
  TempDir dir;
  const auto a = load_series(dir.write("a.csv", "date,value\n2018-01,10.0\n2018-02,11.0\n"));
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a.observations[0].value, 10.0);
  const auto b = load_series(dir.write("b.csv", "date,value\n2018-03,1.0\n2018-01,2.0\n"));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b.first_month().to_string(), "2018-01");
  EXPECT_EQ(b.observations[0].value, 2.0);
}

TEST(LoadSeries, CustomColumnsAndGaps) {
  TempDir dir;
  const auto s = load_series(dir.write("c.csv", "month,x,cpi\n2018-01,a,1.5\n2018-02,b,NA\n2018-03,c,\n2018-04,d,2\n"),
                             {"month", "cpi"});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_FALSE(s.at(*parse_month("2018-02")));
  EXPECT_EQ(*s.at(*parse_month("2018-04")), 2.0);
}

TEST(LoadSeries, Errors) {
  TempDir dir;
  try {
    load_series(dir.write("dup.csv", "date,value\n2018-01,1\n2018-01,2\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate month 2018-01"), std::string::npos) << e.what();
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
  try {
    load_series(dir.write("bad.csv", "date,value\n2018-01,1\n2018-02,abc\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_series(dir.path() / "missing.csv"), Error);
  EXPECT_THROW(load_series(dir.write("nocol.csv", "when,value\n2018-01,1\n")), Error);
  EXPECT_THROW(load_series(dir.write("baddate.csv", "date,value\n2018-13,1\n")), Error);
}

TEST(LoadSeries, SaveRoundTripIsBitExact) {
  TempDir dir;
  Rng rng(3);
  MacroSeries s;
  s.name = "x";
  for (int i = 0; i < 200; ++i) s.observations.push_back({MonthStamp(2000, 1) + i, rng.normal() * 1e-3, {}});
  s.observations.push_back({MonthStamp(2000, 1) + 200, 0.1, {}});
  const auto p = dir.path() / "rt.csv";
  save_series(s, p);
  const auto back = load_series(p);
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(back.observations[i].value, s.observations[i].value);
    EXPECT_EQ(back.observations[i].month, s.observations[i].month);
  }
}

TEST(ToMonthly, Methods) {
  const auto d = daily({{"2018-01-02", 1}, {"2018-01-15", 2}, {"2018-01-31", 3}});
  EXPECT_DOUBLE_EQ(to_monthly(d, MonthlyMethod::kMean).observations.at(0).value, 2.0);
  EXPECT_DOUBLE_EQ(to_monthly(d, MonthlyMethod::kLast).observations.at(0).value, 3.0);
  const auto gap = series("g", {{"2018-01", 1.0}, {"2018-03", 3.0}});
  const auto filled = to_monthly(gap, MonthlyMethod::kLinearInterp);
  ASSERT_EQ(filled.size(), 3u);
  EXPECT_DOUBLE_EQ(filled.observations[1].value, 2.0);
}

TEST(ToMonthly, Idempotent) {
  const auto d = daily({{"2018-01-02", 1}, {"2018-01-15", 2}, {"2018-03-31", 5}, {"2018-04-01", 4}});
  for (auto method : {MonthlyMethod::kLast, MonthlyMethod::kMean, MonthlyMethod::kLinearInterp}) {
    const auto once = to_monthly(d, method);
    const auto twice = to_monthly(once, method);
    ASSERT_EQ(once.size(), twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(once.observations[i].value, twice.observations[i].value);
  }
}

TEST(ToMonthly, Errors) {
  EXPECT_THROW(to_monthly(DatedSeries{}, MonthlyMethod::kMean), Error);
  const auto s = series("s", {{"2018-02", 1.0}, {"2018-03", 2.0}});
  EXPECT_THROW(to_monthly(s, MonthlyMethod::kLinearInterp, MonthRange{MonthStamp(2018, 1), MonthStamp(2018, 3)}),
               Error);
}

TEST(Reliability, Examples) {
  EXPECT_DOUBLE_EQ(reliability_score({1, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(reliability_score({0, 1, 1}), 0.0);
  EXPECT_NEAR(reliability_score({0.75, 0.5, 0.5}), 0.6, 1e-15);
  EXPECT_THROW(reliability_score({1.1, 0, 0}), Error);
  EXPECT_THROW(reliability_score({0.5, -0.1, 0}), Error);
}

TEST(FuseHybrid, Examples) {
  const auto a = series("a", {{"2018-01", 10.0}});
  const auto p = series("p", {{"2018-01", 20.0}}, SourceKind::kProxy);
  EXPECT_EQ(fuse_hybrid(a, p, 1.0).observations[0].value, 10.0);
  EXPECT_EQ(fuse_hybrid(a, p, 0.0).observations[0].value, 20.0);
  const auto h = fuse_hybrid(a, p, 0.6);
  EXPECT_NEAR(h.observations[0].value, 14.0, 1e-12);
  EXPECT_EQ(h.source_kind, SourceKind::kHybrid);
  EXPECT_EQ(*h.reliability, 0.6);
  EXPECT_THROW(fuse_hybrid(a, p, 1.5), Error);
  EXPECT_THROW(fuse_hybrid(MacroSeries{}, MacroSeries{}, 0.5), Error);
}

TEST(FuseHybrid, PassThroughOfSoleSource) {
  const auto a = series("a", {{"2018-01", 10.0}, {"2018-03", 30.0}});
  const auto p = series("p", {{"2018-01", 20.0}, {"2018-02", 25.0}}, SourceKind::kProxy);
  const auto h = fuse_hybrid(a, p, 0.5);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h.observations[0].origin, SourceKind::kHybrid);
  EXPECT_EQ(h.observations[1].origin, SourceKind::kProxy);
  EXPECT_EQ(h.observations[1].value, 25.0);
  EXPECT_EQ(h.observations[2].origin, SourceKind::kOfficial);
  EXPECT_EQ(h.observations[2].value, 30.0);
}

TEST(FuseHybrid, MonotoneAndConvex) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const double hi = rng.normal() + 5.0;
    const double lo = hi - rng.uniform() * 3.0;
    const auto a = series("a", {{"2018-01", hi}});
    const auto p = series("p", {{"2018-01", lo}});
    double prev = -1e300;
    for (int k = 0; k <= 20; ++k) {
      const double v = fuse_hybrid(a, p, k / 20.0).observations[0].value;
      EXPECT_GE(v, prev);
      EXPECT_GE(v, lo);
      EXPECT_LE(v, hi);
      prev = v;
    }
  }
}

TEST(Manifest, LoadsAndFusesInflation) {
  TempDir dir;
  dir.write("idx.csv", "date,value\n2018-01,100\n2018-02,110\n2018-03,121\n");
  dir.write("fx.csv", "date,value\n2018-01-31,1\n2018-02-28,1.1\n2018-03-30,1.2\n");
  dir.write("cpi.csv", "date,value\n2018-02,0.02\n2018-03,0.04\n");
  dir.write("m2.csv", "date,value\n2018-02,0.06\n2018-03,0.08\n2018-04,0.01\n");
  const auto path = dir.write("manifest.json", R"({
    "schema_version": 1,
    "series": [
      {"name": "idx", "path": "idx.csv", "role": "equity_index"},
      {"name": "usd", "path": "fx.csv", "role": "fx"},
      {"name": "cpi", "path": "cpi.csv", "role": "inflation", "source_kind": "official",
       "reliability": {"timeliness": 0.75, "revision_volatility": 0.5, "crosscheck_error": 0.5}},
      {"name": "m2", "path": "m2.csv", "role": "inflation", "source_kind": "proxy"}
    ]})");
  const auto panel = load_panel(load_manifest(path));
  EXPECT_TRUE(panel.contains("equity_index"));
  EXPECT_TRUE(panel.contains("usd"));
  const auto& infl = panel.get("inflation");
  EXPECT_EQ(infl.source_kind, SourceKind::kHybrid);
  EXPECT_NEAR(*infl.reliability, 0.6, 1e-15);
  EXPECT_NEAR(*infl.at(MonthStamp(2018, 2)), 0.6 * 0.02 + 0.4 * 0.06, 1e-15);
  EXPECT_NEAR(*infl.at(MonthStamp(2018, 4)), 0.01, 1e-15);
  EXPECT_FALSE(panel.warnings.empty());
  EXPECT_THROW(panel.get("nope"), Error);
}

TEST(Manifest, Errors) {
  TempDir dir;
  dir.write("a.csv", "date,value\n2018-01,1\n");
  EXPECT_THROW(load_manifest(dir.write("m1.json", "{not json")), Error);
  EXPECT_THROW(load_manifest(dir.write("m2.json", R"({"series": [{"name": "a", "path": "a.csv", "role": "bogus"}]})")),
               Error);
  const auto m = load_manifest(dir.write("m3.json", R"({"series": [{"name": "a", "path": "a.csv", "role": "fx"}]})"));
  EXPECT_THROW(load_panel(m), Error);  // no equity index
}

}  // namespace
}  // namespace hedgefx::dataio
