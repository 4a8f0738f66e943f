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

#ifndef MTSA_METRICS_H_
#define MTSA_METRICS_H_

#include <cstddef>
#include <vector>

#include "mtsa/tagging.h"

namespace mtsa {

// Targeted sentiment scores over exact span matches.
//   f1_a: boundary-only F1 (target extraction)
//   f1_i: boundary + label F1 (full targeted task)
//   acc_s: label accuracy over boundary-matched targets
//   f1_s: macro F1 of labels over boundary-matched targets
// Ratios with a zero denominator are 0.
struct TargetedMetrics {
  double f1_a = 0.0;
  double precision_a = 0.0;
  double recall_a = 0.0;
  double acc_s = 0.0;
  double f1_s = 0.0;
  double f1_i = 0.0;
  double precision_i = 0.0;
  double recall_i = 0.0;
  std::size_t gold_spans = 0;
  std::size_t predicted_spans = 0;
  std::size_t boundary_matches = 0;
  std::size_t full_matches = 0;
};

// One gold and one predicted span list per sentence. Macro f1_s averages
// over labels that occur among the boundary-matched pairs (gold or
// predicted side). Throws DataError on a sentence-count mismatch.
TargetedMetrics ComputeMetrics(const std::vector<std::vector<Span>>& gold,
                               const std::vector<std::vector<Span>>& predicted);

double F1(double precision, double recall);

}  // namespace mtsa

#endif  // MTSA_METRICS_H_
