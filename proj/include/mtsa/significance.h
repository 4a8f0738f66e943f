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

#ifndef MTSA_SIGNIFICANCE_H_
#define MTSA_SIGNIFICANCE_H_

#include <span>
#include <string>

namespace mtsa {

struct TestResult {
  std::string test;     // "wilcoxon" or "welch"
  double statistic = 0.0;
  double p_value = 1.0;  // two-sided
  double df = 0.0;       // Welch only
};

// Paired Wilcoxon signed-rank test with an exact null distribution.
// Zero differences are dropped; tied |differences| share their average
// rank. The statistic is min(W+, W-); the p-value counts sign assignments
// at least as far from the centre as the observed W+. Throws
// DomainError for unequal or too-short samples and DegenerateSampleError
// when every difference is zero.
TestResult WilcoxonSignedRank(std::span<const double> a,
                              std::span<const double> b);

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
// freedom. Throws DegenerateSampleError when both variances are zero.
TestResult WelchTTest(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta I_x(a, b) (continued fraction, modified
// Lentz).
double RegularizedIncompleteBeta(double a, double b, double x);

// P(T > t) for Student's t with `df` degrees of freedom.
double StudentTSurvival(double t, double df);

double Mean(std::span<const double> v);
// Sample standard deviation (n - 1 denominator); 0 for a single value.
double SampleStdDev(std::span<const double> v);

}  // namespace mtsa

#endif  // MTSA_SIGNIFICANCE_H_
