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


// Exact two-sided Wilcoxon signed-rank p-value by listing all 2^n sign
// patterns of the non-zero differences.

#ifndef MTSA_TESTS_ORACLES_WILCOXON_ENUMERATION_H_
#define MTSA_TESTS_ORACLES_WILCOXON_ENUMERATION_H_

#include <algorithm>
#include <cmath>
#include <vector>

namespace mtsa::oracle {

struct WilcoxonOracle {
  double statistic;
  double p_value;
};

inline WilcoxonOracle EnumerateWilcoxon(const std::vector<double>& a,
                                        const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  }
  const std::size_t n = d.size();
  // Average ranks by counting: rank = #smaller + (#equal + 1) / 2.
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double smaller = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++smaller;
      if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    rank[i] = smaller + (equal + 1) / 2;
  }
  double total = 0, w_plus = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += rank[i];
    if (d[i] > 0) w_plus += rank[i];
  }
  const double observed = std::abs(w_plus - (total - w_plus));
  std::size_t extreme = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) w += rank[i];
    }
    if (std::abs(w - (total - w)) >= observed - 1e-9) ++extreme;
  }
  return {std::min(w_plus, total - w_plus),
          std::min(1.0, static_cast<double>(extreme) /
                            static_cast<double>(std::size_t{1} << n))};
}

}  // namespace mtsa::oracle

#endif  // MTSA_TESTS_ORACLES_WILCOXON_ENUMERATION_H_
