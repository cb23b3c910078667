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

#include "hedgefx/tailsel.hpp"

#include <gtest/gtest.h>

#include "hedgefx/error.hpp"
#include "hedgefx/random.hpp"
#include "oracles.hpp"

namespace hedgefx::tailsel {
namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

TEST(MinFeasible, Examples) {
  EXPECT_EQ(min_feasible_tail_quantile(noise(75, 1)), 0.08);
  EXPECT_EQ(min_feasible_tail_quantile(noise(12, 1)), 0.5);
  EXPECT_EQ(min_feasible_tail_quantile(noise(100, 1)), 0.06);
  EXPECT_THROW(min_feasible_tail_quantile(noise(5, 1)), Error);
}

TEST(MinFeasible, TailHoldsExactlyMinCount) {
  for (std::size_t t = 6; t < 400; ++t) {
    const auto r = noise(t, t);
    const double tau = min_feasible_tail_quantile(r);
    EXPECT_EQ(tail_count(r, tau), 6u) << t;
  }
}

TEST(Unify, Examples) {
  EXPECT_EQ(unify_tail_quantile({{"A", 0.08}, {"B", 0.06}, {"C", 0.07}}), 0.08);
  EXPECT_EQ(unify_tail_quantile({{"A", 0.08}}), 0.08);
  EXPECT_EQ(unify_tail_quantile({{"A", 0.5}, {"B", 0.08}}), 0.5);
  EXPECT_THROW(unify_tail_quantile({}), Error);
}

TEST(VarianceCheck, MatchesTwoPassOracle) {
  const std::vector<double> r{-10, -9, 0, 0, 0, 0, 0, 0, 0, 0};
  const auto check = tail_variance_check(r, 0.2);
  const double expected = testing::naive_variance({-10, -9}) / testing::naive_variance(r);
  EXPECT_NEAR(check.ratio, expected, 1e-14);
  EXPECT_EQ(check.passes, expected >= 2.0);
}

TEST(VarianceCheck, Errors) {
  EXPECT_THROW(tail_variance_check(std::vector<double>(10, 1.0), 0.2), Error);
  EXPECT_THROW(tail_variance_check(noise(10, 2), 0.1), Error);
}

TEST(VarianceCheck, NormalTailsAreThin) {
  const auto check = tail_variance_check(noise(10000, 3), 0.08);
  EXPECT_FALSE(check.passes);
  EXPECT_LT(check.ratio, 1.0);
}

TEST(BuildTriplet, Examples) {
  const auto t = build_triplet({{"TR", noise(75, 1)}, {"PK", noise(75, 2)}, {"NG", noise(75, 3)}});
  EXPECT_EQ(t.tau_low, 0.08);
  EXPECT_EQ(t.tau_mid, 0.50);
  EXPECT_EQ(t.tau_high, 0.92);
  EXPECT_EQ(t.variance_ratio.size(), 3u);
  const auto one = build_triplet({{"A", noise(60, 4)}});
  EXPECT_EQ(one.tau_low, 0.10);
  EXPECT_EQ(one.tau_high, 0.90);
  const auto mixed = build_triplet({{"A", noise(75, 5)}, {"B", noise(120, 6)}});
  EXPECT_EQ(mixed.tau_low, 0.08);
  EXPECT_EQ(mixed.tau_high, 0.92);
  EXPECT_THROW(build_triplet({{"A", noise(5, 7)}}), Error);
}

TEST(BuildTriplet, SymmetryFeasibilityMonotonicity) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::map<std::string, std::vector<double>> panel;
    for (int c = 0; c < 3; ++c) panel["c" + std::to_string(c)] = noise(6 + rng.below(200), rng.below(1u << 30));
    const auto t = build_triplet(panel);
    EXPECT_EQ(t.tau_low + t.tau_high, 1.0);
    for (const auto& [name, r] : panel) EXPECT_GE(tail_count(r, t.tau_low), 6u);
    auto shortest = std::min_element(panel.begin(), panel.end(),
                                     [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
    shortest->second.push_back(rng.normal());
    EXPECT_LE(build_triplet(panel).tau_low, t.tau_low);
  }
}

TEST(BuildTriplet, OverrideForSensitivity) {
  const auto base = noise(75, 9);
  for (double tau : {0.10, 0.15, 0.20}) {
    const auto t = build_triplet({{"A", base}}, tau);
    EXPECT_EQ(t.tau_low, tau);
    EXPECT_EQ(t.tau_high, 1.0 - tau);
  }
  EXPECT_THROW(build_triplet({{"A", base}}, 0.9), Error);
  EXPECT_THROW(build_triplet({{"A", base}}, 0.05), Error);
}

}  // namespace
}  // namespace hedgefx::tailsel
