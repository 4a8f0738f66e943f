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

#include "mtsa/metrics.h"

#include <array>
#include <map>
#include <string>
#include <utility>

#include "mtsa/errors.h"

namespace mtsa {
namespace {

double Ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

double F1(double precision, double recall) {
  return precision + recall == 0.0
             ? 0.0
             : 2.0 * precision * recall / (precision + recall);
}

TargetedMetrics ComputeMetrics(
    const std::vector<std::vector<Span>>& gold,
    const std::vector<std::vector<Span>>& predicted) {
  if (gold.size() != predicted.size()) {
    throw DataError("metrics: " + std::to_string(gold.size()) +
                    " gold sentences vs " + std::to_string(predicted.size()) +
                    " predicted");
  }
  TargetedMetrics m;
  // label -> {gold count, predicted count, correct count} on matched pairs
  std::map<std::string, std::array<double, 3>> per_label;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    std::map<std::pair<std::size_t, std::size_t>, const std::string*> by_range;
    for (const Span& g : gold[s]) by_range[{g.start, g.end}] = &g.label;
    m.gold_spans += gold[s].size();
    m.predicted_spans += predicted[s].size();
    for (const Span& p : predicted[s]) {
      auto it = by_range.find({p.start, p.end});
      if (it == by_range.end()) continue;
      ++m.boundary_matches;
      const std::string& gold_label = *it->second;
      per_label[gold_label][0] += 1.0;
      per_label[p.label][1] += 1.0;
      if (gold_label == p.label) {
        ++m.full_matches;
        per_label[gold_label][2] += 1.0;
      }
      by_range.erase(it);
    }
  }
  const double gold_n = static_cast<double>(m.gold_spans);
  const double pred_n = static_cast<double>(m.predicted_spans);
  m.precision_a = Ratio(static_cast<double>(m.boundary_matches), pred_n);
  m.recall_a = Ratio(static_cast<double>(m.boundary_matches), gold_n);
  m.f1_a = F1(m.precision_a, m.recall_a);
  m.precision_i = Ratio(static_cast<double>(m.full_matches), pred_n);
  m.recall_i = Ratio(static_cast<double>(m.full_matches), gold_n);
  m.f1_i = F1(m.precision_i, m.recall_i);
  m.acc_s = Ratio(static_cast<double>(m.full_matches),
                  static_cast<double>(m.boundary_matches));
  double macro = 0.0;
  for (const auto& [label, c] : per_label) {
    macro += F1(Ratio(c[2], c[1]), Ratio(c[2], c[0]));
  }
  m.f1_s = Ratio(macro, static_cast<double>(per_label.size()));
  return m;
}

}  // namespace mtsa
