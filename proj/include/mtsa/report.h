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

#ifndef MTSA_REPORT_H_
#define MTSA_REPORT_H_

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mtsa/metrics.h"
#include "mtsa/significance.h"

namespace mtsa {

// One run's scores keyed by metric name ("f1_a", "acc_s", ...).
using RunMetrics = std::map<std::string, double>;

// The four scores reported per run, in table order.
inline constexpr const char* kReportedMetrics[] = {"f1_a", "acc_s", "f1_s",
                                                   "f1_i"};
inline constexpr std::size_t kCanonicalRuns = 5;
inline constexpr double kSignificanceLevel = 0.05;

struct RunDistribution {
  std::string metric;
  std::vector<double> values;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
};

// Mean and sample sd per metric across runs. Every run must carry the same
// metric names (DataError otherwise); at least two runs are required
// (DomainError).
std::vector<RunDistribution> AggregateRuns(const std::vector<RunMetrics>& runs);

// Test selection per metric: F1-family scores use the rank test, accuracy
// the parametric one. Swappable so routing can be checked in isolation.
struct SignificanceTests {
  using Fn = std::function<TestResult(std::span<const double>,
                                      std::span<const double>)>;
  Fn rank_test = WilcoxonSignedRank;
  Fn mean_test = WelchTTest;
};

struct SignificanceEntry {
  std::string metric;
  TestResult result;
  bool significant = false;
  // Samples carried no information (e.g. identical runs); p is set to 1.
  bool degenerate = false;
};

struct RunComparison {
  std::vector<RunDistribution> baseline;
  std::vector<RunDistribution> candidate;
  std::vector<SignificanceEntry> tests;
  std::vector<std::string> warnings;
};

// Aggregates both run sets and tests every reported metric, candidate vs
// baseline, pairing runs by position. Differing run counts or a count other
// than five produce warnings; fewer than two runs is a DomainError.
RunComparison CompareRuns(const std::vector<RunMetrics>& baseline,
                          const std::vector<RunMetrics>& candidate,
                          const SignificanceTests& tests = {},
                          double alpha = kSignificanceLevel);

RunMetrics MetricsToRun(const TargetedMetrics& m);

// Machine-readable report: metric -> mean, sd, per-run values, p-values.
std::string FormatReportJson(const RunComparison& c);
// "mean (sd)" table in percent; a '*' marks a significant difference.
std::string FormatReportTable(const RunComparison& c);

std::string FormatMetricsJson(const TargetedMetrics& m);
std::string FormatMetricsTable(const TargetedMetrics& m);
RunMetrics ReadRunMetricsFile(const std::string& path);
// All *.json files of a directory, sorted by file name.
std::vector<RunMetrics> ReadRunDirectory(const std::string& dir);

}  // namespace mtsa

#endif  // MTSA_REPORT_H_
