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

#include "hedgefx/stats.hpp"

#include <algorithm>
#include <cmath>

#include "hedgefx/error.hpp"

namespace hedgefx::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw invalid_argument("stats", "mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw invalid_argument("stats", "variance needs at least 2 observations");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

std::size_t order_statistic_rank(double tau, std::size_t n) {
  const double scaled = tau * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(scaled - 1e-9));
  return std::clamp<std::size_t>(k, 1, n);
}

double empirical_quantile(std::span<const double> x, double tau) {
  if (x.empty()) throw invalid_argument("stats", "quantile of empty sample");
  std::vector<double> sorted(x.begin(), x.end());
  const std::size_t k = order_statistic_rank(tau, sorted.size());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
  return sorted[k - 1];
}

double interpolated_quantile(std::vector<double> x, double p) {
  if (x.empty()) throw invalid_argument("stats", "quantile of empty sample");
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

namespace {

// Merge sort on y counting exchanges (discordant pairs among x-ordered rows).
long long sort_counting_swaps(std::vector<double>& y, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  long long swaps = sort_counting_swaps(y, buf, lo, mid) + sort_counting_swaps(y, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (y[j] < y[i]) {
      swaps += static_cast<long long>(mid - i);
      buf[k++] = y[j++];
    } else {
      buf[k++] = y[i++];
    }
  }
  while (i < mid) buf[k++] = y[i++];
  while (j < hi) buf[k++] = y[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            y.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

long long tied_pairs(const std::vector<double>& sorted) {
  long long total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      total += static_cast<long long>(run) * static_cast<long long>(run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

}  // namespace

// Knight's O(n log n) algorithm for tau-b.
double kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw invalid_argument("stats", "kendall_tau length mismatch");
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  // Pairs tied in x, and tied in both x and y.
  long long ties_x = 0, ties_xy = 0;
  {
    std::size_t run_x = 1, run_xy = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      const bool same_x = i < n && x[order[i]] == x[order[i - 1]];
      const bool same_xy = same_x && y[order[i]] == y[order[i - 1]];
      if (same_xy) {
        ++run_xy;
      } else {
        ties_xy += static_cast<long long>(run_xy) * static_cast<long long>(run_xy - 1) / 2;
        run_xy = 1;
      }
      if (same_x) {
        ++run_x;
      } else {
        ties_x += static_cast<long long>(run_x) * static_cast<long long>(run_x - 1) / 2;
        run_x = 1;
      }
    }
  }

  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const long long swaps = sort_counting_swaps(ys, buf, 0, n);
  const long long ties_y = tied_pairs(ys);

  const long long n0 = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
  const double denom = std::sqrt(static_cast<double>(n0 - ties_x) * static_cast<double>(n0 - ties_y));
  if (denom == 0.0) return 0.0;
  const long long numer = n0 - ties_x - ties_y + ties_xy - 2 * swaps;
  return static_cast<double>(numer) / denom;
}

}  // namespace hedgefx::stats
