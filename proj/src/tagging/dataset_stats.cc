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

#include "mtsa/dataset_stats.h"

#include <cmath>
#include <set>

#include "mtsa/errors.h"

namespace mtsa {

double Entropy(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / total;
    h -= p * std::log(p);
  }
  return h;
}

double ExcessKurtosis(std::span<const double> values) {
  if (values.empty()) throw DomainError("kurtosis of an empty vector");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m4 /= n;
  if (m2 == 0.0) return -3.0;
  return m4 / (m2 * m2) - 3.0;
}

DatasetStats ComputeDatasetStats(const std::vector<Sentence>& sentences,
                                 const LabelScheme& scheme) {
  if (sentences.empty()) throw DataError("dataset is empty");
  DatasetStats st;
  st.sentences = sentences.size();
  st.label_count = scheme.size();
  std::vector<double> counts(scheme.size(), 0.0);
  std::size_t target_tokens = 0;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const Sentence& sent = sentences[s];
    std::vector<int> tags;
    if (!sent.tags.empty()) {
      tags = TagIndices(sent.tags, scheme);
    } else {
      tags = SpansToTags(sent.spans, sent.tokens.size(), scheme,
                         "sentence " + std::to_string(s));
    }
    st.tokens += tags.size();
    for (int t : tags) counts[t] += 1.0;
    const std::vector<Span> spans = TagsToSpans(tags, scheme).spans;
    st.targets += spans.size();
    std::set<std::string> labels;
    for (const Span& sp : spans) {
      target_tokens += sp.length();
      labels.insert(sp.label);
    }
    if (labels.size() > 1) ++st.multi_polarity_sentences;
  }
  st.mean_target_length =
      st.targets == 0 ? 0.0
                      : static_cast<double>(target_tokens) /
                            static_cast<double>(st.targets);
  st.label_entropy = Entropy(counts);
  std::vector<double> freq(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    freq[i] = counts[i] / static_cast<double>(st.tokens);
    if (counts[i] > 0) ++st.observed_labels;
  }
  st.label_kurtosis = ExcessKurtosis(freq);
  return st;
}

}  // namespace mtsa
