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

#include "mtsa/report.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mtsa/errors.h"

namespace mtsa {
namespace {

bool IsRankMetric(const std::string& name) { return name.rfind("f1", 0) == 0; }

std::string Fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

const RunDistribution* FindMetric(const std::vector<RunDistribution>& d,
                                  const std::string& name) {
  for (const auto& r : d) {
    if (r.metric == name) return &r;
  }
  return nullptr;
}

}  // namespace

std::vector<RunDistribution> AggregateRuns(
    const std::vector<RunMetrics>& runs) {
  if (runs.size() < 2) {
    throw DomainError("aggregation needs at least two runs, got " +
                      std::to_string(runs.size()));
  }
  for (std::size_t r = 1; r < runs.size(); ++r) {
    bool same = runs[r].size() == runs[0].size();
    for (auto a = runs[r].begin(), b = runs[0].begin(); same && a != runs[r].end();
         ++a, ++b) {
      same = a->first == b->first;
    }
    if (!same) {
      throw DataError("run " + std::to_string(r) +
                      " reports a different metric set than run 0");
    }
  }
  // Reported metrics in table order, then any others by name.
  std::vector<std::string> names;
  for (const char* name : kReportedMetrics) {
    if (runs[0].contains(name)) names.push_back(name);
  }
  for (const auto& [name, unused] : runs[0]) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      names.push_back(name);
    }
  }
  std::vector<RunDistribution> out;
  for (const std::string& name : names) {
    RunDistribution d;
    d.metric = name;
    for (const RunMetrics& run : runs) d.values.push_back(run.at(name));
    d.mean = Mean(d.values);
    d.sd = SampleStdDev(d.values);
    out.push_back(std::move(d));
  }
  return out;
}

RunComparison CompareRuns(const std::vector<RunMetrics>& baseline,
                          const std::vector<RunMetrics>& candidate,
                          const SignificanceTests& tests, double alpha) {
  RunComparison c;
  for (const auto* set : {&baseline, &candidate}) {
    if (set->size() != kCanonicalRuns && set->size() >= 2) {
      c.warnings.push_back("expected " + std::to_string(kCanonicalRuns) +
                           " runs, got " + std::to_string(set->size()));
    }
  }
  c.baseline = AggregateRuns(baseline);
  c.candidate = AggregateRuns(candidate);
  const bool paired = baseline.size() == candidate.size();
  if (!paired) {
    c.warnings.push_back("run counts differ; rank test skipped");
  }
  for (const char* name : kReportedMetrics) {
    const RunDistribution* b = FindMetric(c.baseline, name);
    const RunDistribution* a = FindMetric(c.candidate, name);
    if (a == nullptr || b == nullptr) continue;
    SignificanceEntry e;
    e.metric = name;
    const bool rank = IsRankMetric(name);
    if (rank && !paired) continue;
    try {
      e.result = rank ? tests.rank_test(a->values, b->values)
                      : tests.mean_test(a->values, b->values);
    } catch (const DegenerateSampleError&) {
      e.result.test = rank ? "wilcoxon" : "welch";
      e.result.p_value = 1.0;
      e.degenerate = true;
    }
    e.significant = !e.degenerate && e.result.p_value < alpha;
    c.tests.push_back(std::move(e));
  }
  return c;
}

RunMetrics MetricsToRun(const TargetedMetrics& m) {
  return {{"f1_a", m.f1_a}, {"acc_s", m.acc_s}, {"f1_s", m.f1_s},
          {"f1_i", m.f1_i}};
}

std::string FormatReportJson(const RunComparison& c) {
  nlohmann::ordered_json j;
  auto dist = [](const std::vector<RunDistribution>& d) {
    nlohmann::ordered_json o;
    for (const auto& r : d) {
      o[r.metric] = {{"mean", r.mean}, {"sd", r.sd}, {"runs", r.values}};
    }
    return o;
  };
  j["baseline"] = dist(c.baseline);
  j["candidate"] = dist(c.candidate);
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (const auto& e : c.tests) {
    nlohmann::ordered_json entry = {{"test", e.result.test},
                                    {"statistic", e.result.statistic},
                                    {"p_value", e.result.p_value},
                                    {"significant", e.significant},
                                    {"degenerate", e.degenerate}};
    if (e.result.test == "welch") entry["df"] = e.result.df;
    t[e.metric] = entry;
  }
  j["tests"] = t;
  j["alpha"] = kSignificanceLevel;
  j["warnings"] = c.warnings;
  return j.dump(2) + "\n";
}

std::string FormatReportTable(const RunComparison& c) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %-16s %-16s %-9s %-9s\n", "metric",
                "baseline", "candidate", "test", "p");
  out << line;
  auto cell = [](const RunDistribution* d) {
    if (d == nullptr) return std::string("-");
    return Fixed(100.0 * d->mean, 2) + " (" + Fixed(100.0 * d->sd, 2) + ")";
  };
  for (const char* name : kReportedMetrics) {
    const RunDistribution* b = FindMetric(c.baseline, name);
    const RunDistribution* a = FindMetric(c.candidate, name);
    if (a == nullptr && b == nullptr) continue;
    std::string test = "-";
    std::string p = "-";
    for (const auto& e : c.tests) {
      if (e.metric != name) continue;
      test = e.result.test;
      p = Fixed(e.result.p_value, 4) + (e.significant ? "*" : "");
    }
    std::snprintf(line, sizeof(line), "%-8s %-16s %-16s %-9s %-9s\n", name,
                  cell(b).c_str(), cell(a).c_str(), test.c_str(), p.c_str());
    out << line;
  }
  for (const auto& w : c.warnings) out << "warning: " << w << "\n";
  return out.str();
}

std::string FormatMetricsJson(const TargetedMetrics& m) {
  nlohmann::ordered_json j = {
      {"f1_a", m.f1_a},
      {"acc_s", m.acc_s},
      {"f1_s", m.f1_s},
      {"f1_i", m.f1_i},
      {"precision_a", m.precision_a},
      {"recall_a", m.recall_a},
      {"precision_i", m.precision_i},
      {"recall_i", m.recall_i},
      {"gold_spans", m.gold_spans},
      {"predicted_spans", m.predicted_spans},
      {"boundary_matches", m.boundary_matches},
      {"full_matches", m.full_matches},
  };
  return j.dump(2) + "\n";
}

std::string FormatMetricsTable(const TargetedMetrics& m) {
  std::ostringstream out;
  out << "F1-a  " << Fixed(100.0 * m.f1_a, 2) << "\n"
      << "acc-s " << Fixed(100.0 * m.acc_s, 2) << "\n"
      << "F1-s  " << Fixed(100.0 * m.f1_s, 2) << "\n"
      << "F1-i  " << Fixed(100.0 * m.f1_i, 2) << "\n";
  return out.str();
}

RunMetrics ReadRunMetricsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what(), 0, path);
  }
  RunMetrics run;
  for (const char* name : kReportedMetrics) {
    if (!j.contains(name) || !j[name].is_number()) {
      throw DataError(path + ": missing numeric '" + name + "'");
    }
    run[name] = j[name].get<double>();
  }
  return run;
}

std::vector<RunMetrics> ReadRunDirectory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError("'" + dir + "' is not a directory");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<RunMetrics> runs;
  for (const auto& f : files) runs.push_back(ReadRunMetricsFile(f));
  return runs;
}

}  // namespace mtsa
