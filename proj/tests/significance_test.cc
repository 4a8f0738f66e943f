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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "mtsa/errors.h"
#include "mtsa/numcore/rng.h"
#include "mtsa/significance.h"
#include "oracles/wilcoxon_enumeration.h"

namespace mtsa {
namespace {

// Welch quantities straight from the textbook definitions.
struct WelchOracle {
  double t;
  double df;
};

WelchOracle DirectWelch(const std::vector<double>& a,
                        const std::vector<double>& b) {
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto var = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
  };
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double qa = var(a) / na, qb = var(b) / nb;
  return {(mean(a) - mean(b)) / std::sqrt(qa + qb),
          (qa + qb) * (qa + qb) / (qa * qa / (na - 1) + qb * qb / (nb - 1))};
}

TEST(WilcoxonTest, ConstantShiftOfFive) {
  const std::vector<double> b = {60.1, 61.3, 59.8, 62.0, 60.7};
  std::vector<double> a = b;
  for (double& x : a) x += 1.5;
  const TestResult r = WilcoxonSignedRank(a, b);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 2.0 / 32.0);
  EXPECT_DOUBLE_EQ(r.p_value, 0.0625);
}

TEST(WilcoxonTest, ReferenceValues) {
  // scipy.stats.wilcoxon(a, b, method="exact").
  const std::vector<double> a = {61.2, 63.5, 62.8, 60.9, 64.1};
  const std::vector<double> b = {59.8, 60.2, 61.5, 58.9, 60.7};
  const TestResult r = WilcoxonSignedRank(a, b);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_NEAR(r.p_value, 0.0625, 1e-15);
  const std::vector<double> c = {1.0, 2.5, 3.1, 4.7, 5.2, 6.3};
  const std::vector<double> d = {1.2, 2.0, 3.5, 4.0, 5.0, 6.0};
  const TestResult s = WilcoxonSignedRank(c, d);
  EXPECT_EQ(s.statistic, 5.0);
  EXPECT_NEAR(s.p_value, 0.3125, 1e-15);
}

TEST(WilcoxonTest, DegenerateAndDomainErrors) {
  const std::vector<double> a = {1, 2, 3};
  EXPECT_THROW(WilcoxonSignedRank(a, a), DegenerateSampleError);
  EXPECT_THROW(WilcoxonSignedRank(a, std::vector<double>{1, 2}), DomainError);
}

TEST(WilcoxonTest, MatchesFullEnumeration) {
  SeededRng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.Below(11);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = 60.0 + static_cast<double>(rng.Below(20)) / 4.0;
      // Quarter steps create ties and the odd zero difference.
      a[i] = b[i] + (static_cast<double>(rng.Below(13)) - 5.0) / 4.0;
    }
    const auto want = oracle::EnumerateWilcoxon(a, b);
    bool any_nonzero = false;
    for (std::size_t i = 0; i < n; ++i) any_nonzero |= a[i] != b[i];
    if (!any_nonzero) continue;
    const TestResult got = WilcoxonSignedRank(a, b);
    ASSERT_NEAR(got.p_value, want.p_value, 1e-12) << "trial " << trial;
    ASSERT_EQ(got.statistic, want.statistic) << "trial " << trial;
  }
}

TEST(WelchTest, SymmetricCaseAndHandFormula) {
  const std::vector<double> a = {1, 2, 3};
  const TestResult same = WelchTTest(a, a);
  EXPECT_EQ(same.statistic, 0.0);
  EXPECT_NEAR(same.p_value, 1.0, 1e-15);

  const std::vector<double> b = {2, 3, 4};
  const TestResult r = WelchTTest(a, b);
  const WelchOracle o = DirectWelch(a, b);
  EXPECT_NEAR(r.statistic, o.t, 1e-10);
  EXPECT_NEAR(r.df, o.df, 1e-10);
  EXPECT_NEAR(r.df, 4.0, 1e-12);
  // scipy.stats.ttest_ind(a, b, equal_var=False).
  EXPECT_NEAR(r.statistic, -1.224744871391589, 1e-12);
  EXPECT_NEAR(r.p_value, 0.2878641347266908, 1e-10);
}

TEST(WelchTest, ReferenceValue) {
  const std::vector<double> a = {61.2, 63.5, 62.8, 60.9, 64.1};
  const std::vector<double> b = {59.8, 60.2, 61.5, 58.9, 60.7};
  const TestResult r = WelchTTest(a, b);
  EXPECT_NEAR(r.statistic, 2.9824951311598418, 1e-10);
  EXPECT_NEAR(r.p_value, 0.02004464907794799, 1e-10);
}

TEST(WelchTest, EqualVarianceEqualSizeGivesPooledDf) {
  const std::vector<double> a = {1, 4, 2, 7};
  std::vector<double> b = a;
  for (double& x : b) x += 3;
  EXPECT_NEAR(WelchTTest(a, b).df, 6.0, 1e-12);
}

TEST(WelchTest, DegenerateAndDomainErrors) {
  const std::vector<double> c = {2, 2, 2};
  EXPECT_THROW(WelchTTest(c, c), DegenerateSampleError);
  EXPECT_THROW(WelchTTest(std::vector<double>{1}, c), DomainError);
}

TEST(StudentTTest, SurvivalReferenceValues) {
  // 2 * scipy.stats.t.sf(t, df).
  EXPECT_NEAR(2 * StudentTSurvival(2.0, 10), 0.07338803477074039, 1e-12);
  EXPECT_NEAR(2 * StudentTSurvival(1.5, 3.7), 0.2135981692020133, 1e-12);
  EXPECT_NEAR(2 * StudentTSurvival(0.3, 1.2), 0.8077728113170466, 1e-12);
  EXPECT_NEAR(2 * StudentTSurvival(12.0, 4), 0.000276428548502973, 1e-15);
  EXPECT_NEAR(StudentTSurvival(0.0, 7), 0.5, 1e-15);
}

TEST(IncompleteBetaTest, ClosedForms) {
  // I_x(1, b) = 1 - (1 - x)^b and I_x(a, 1) = x^a.
  EXPECT_NEAR(RegularizedIncompleteBeta(1, 3, 0.2), 1 - std::pow(0.8, 3), 1e-14);
  EXPECT_NEAR(RegularizedIncompleteBeta(2.5, 1, 0.6), std::pow(0.6, 2.5), 1e-14);
  EXPECT_EQ(RegularizedIncompleteBeta(2, 3, 0.0), 0.0);
  EXPECT_EQ(RegularizedIncompleteBeta(2, 3, 1.0), 1.0);
}

TEST(DescriptiveTest, MeanAndSd) {
  const std::vector<double> v = {1, 2, 3, 4, 5};
  EXPECT_EQ(Mean(v), 3.0);
  EXPECT_NEAR(SampleStdDev(v), std::sqrt(2.5), 1e-15);
}

}  // namespace
}  // namespace mtsa
