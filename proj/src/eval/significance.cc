// Copyright 2026 The mtsa Authors.
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

#include "mtsa/significance.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <vector>

#include "mtsa/errors.h"

namespace mtsa {

double Mean(std::span<const double> v) {
  if (v.empty()) throw DomainError("mean of an empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double SampleStdDev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = Mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

TestResult WilcoxonSignedRank(std::span<const double> a,
                              std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("wilcoxon: unequal lengths");
  if (a.size() < 2) throw DomainError("wilcoxon: need at least two pairs");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) {
    throw DegenerateSampleError("wilcoxon: all differences are zero");
  }
  const std::size_t n = diffs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(diffs[x]) < std::abs(diffs[y]);
  });
  // Doubled average ranks are integers: positions i..j (1-based) -> i + j.
  std::vector<long long> rank2(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n &&
           std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) {
      ++j;
    }
    for (std::size_t q = i; q <= j; ++q) {
      rank2[order[q]] = static_cast<long long>(i + 1 + j + 1);
    }
    i = j + 1;
  }
  long long total = 0;
  long long w_plus = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += rank2[i];
    if (diffs[i] > 0) w_plus += rank2[i];
  }
  // Number of sign assignments reaching each doubled positive-rank sum.
  std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
  count[0] = 1.0;
  long long reach = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (long long s = reach; s >= 0; --s) {
      if (count[s] != 0.0) count[s + rank2[i]] += count[s];
    }
    reach += rank2[i];
  }
  const long long observed = std::llabs(2 * w_plus - total);
  double extreme = 0.0;
  for (long long s = 0; s <= total; ++s) {
    if (std::llabs(2 * s - total) >= observed) extreme += count[s];
  }
  TestResult r;
  r.test = "wilcoxon";
  r.statistic =
      static_cast<double>(std::min(w_plus, total - w_plus)) / 2.0;
  r.p_value = std::min(1.0, extreme / std::ldexp(1.0, static_cast<int>(n)));
  return r;
}

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("incomplete beta: a, b > 0");
  if (x < 0.0 || x > 1.0) throw DomainError("incomplete beta: x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x > (a + 1.0) / (a + b + 2.0)) {
    return 1.0 - RegularizedIncompleteBeta(b, a, 1.0 - x);
  }
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                std::lgamma(b) + a * std::log(x) +
                                b * std::log1p(-x));
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double f = d;
  for (int m = 1; m <= 10000; ++m) {
    const double md = m;
    // Even step.
    double num = md * (b - md) * x / ((a + 2 * md - 1) * (a + 2 * md));
    d = 1.0 + num * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    f *= c * d;
    // Odd step.
    num = -(a + md) * (a + b + md) * x / ((a + 2 * md) * (a + 2 * md + 1));
    d = 1.0 + num * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return front * f / a;
}

double StudentTSurvival(double t, double df) {
  if (!(df > 0.0)) throw DomainError("student t: df must be positive");
  const double tail = 0.5 * RegularizedIncompleteBeta(df / 2.0, 0.5,
                                                       df / (df + t * t));
  return t >= 0.0 ? tail : 1.0 - tail;
}

TestResult WelchTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw DomainError("welch: each sample needs at least two values");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = std::pow(SampleStdDev(a), 2);
  const double vb = std::pow(SampleStdDev(b), 2);
  const double qa = va / na;
  const double qb = vb / nb;
  if (qa + qb == 0.0) {
    throw DegenerateSampleError("welch: both samples have zero variance");
  }
  TestResult r;
  r.test = "welch";
  r.statistic = (Mean(a) - Mean(b)) / std::sqrt(qa + qb);
  r.df = (qa + qb) * (qa + qb) /
         (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  r.p_value = std::min(1.0, 2.0 * StudentTSurvival(std::abs(r.statistic), r.df));
  return r;
}

}  // namespace mtsa
