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


// BIOUL transition rules written out directly on tag strings.

#ifndef MTSA_TESTS_ORACLES_BIOUL_RULES_H_
#define MTSA_TESTS_ORACLES_BIOUL_RULES_H_

#include <string>
#include <vector>

namespace mtsa::oracle {

inline char Prefix(const std::string& tag) { return tag[0]; }
inline std::string Category(const std::string& tag) {
  return tag.size() > 2 ? tag.substr(2) : "";
}

// Tags of a BIOUL alphabet over `categories`, any order.
inline std::vector<std::string> BioulTags(
    const std::vector<std::string>& categories) {
  std::vector<std::string> tags = {"O"};
  for (const auto& c : categories) {
    for (const char* p : {"B-", "I-", "L-", "U-"}) tags.push_back(p + c);
  }
  return tags;
}

// "" stands for the sequence boundary.
inline bool BioulAllowed(const std::string& prev, const std::string& next) {
  const bool prev_open = !prev.empty() && (Prefix(prev) == 'B' ||
                                           Prefix(prev) == 'I');
  if (next.empty()) return !prev_open;
  if (prev_open) {
    return (Prefix(next) == 'I' || Prefix(next) == 'L') &&
           Category(next) == Category(prev);
  }
  return Prefix(next) == 'O' || Prefix(next) == 'B' || Prefix(next) == 'U';
}

inline std::size_t CountBioulTransitions(
    const std::vector<std::string>& categories) {
  const auto tags = BioulTags(categories);
  std::size_t n = 0;
  for (const auto& a : tags) {
    for (const auto& b : tags) n += BioulAllowed(a, b) ? 1 : 0;
  }
  return n;
}

}  // namespace mtsa::oracle

#endif  // MTSA_TESTS_ORACLES_BIOUL_RULES_H_
