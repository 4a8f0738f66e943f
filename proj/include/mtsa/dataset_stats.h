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

#ifndef MTSA_DATASET_STATS_H_
#define MTSA_DATASET_STATS_H_

#include <span>
#include <vector>

#include "mtsa/tagging.h"

namespace mtsa {

// Corpus summary in the layout of a dataset-statistics table.
struct DatasetStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t targets = 0;
  double mean_target_length = 0.0;
  // Sentences with at least two targets whose labels differ.
  std::size_t multi_polarity_sentences = 0;
  // Natural-log entropy of the token-level tag distribution.
  double label_entropy = 0.0;
  // Fisher excess kurtosis of the tag relative-frequency vector taken over
  // the full tag alphabet (population moments).
  double label_kurtosis = 0.0;
  std::size_t label_count = 0;
  std::size_t observed_labels = 0;
};

// Throws DataError on an empty dataset.
DatasetStats ComputeDatasetStats(const std::vector<Sentence>& sentences,
                                 const LabelScheme& scheme);

// -sum p ln p over the normalized counts; zero entries contribute nothing.
double Entropy(std::span<const double> counts);

// Population excess kurtosis m4 / m2^2 - 3. A constant vector has no
// spread; it is reported as -3 (the m4 = 0 limit) rather than NaN.
double ExcessKurtosis(std::span<const double> values);

}  // namespace mtsa

#endif  // MTSA_DATASET_STATS_H_
