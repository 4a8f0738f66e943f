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

#ifndef MTSA_TAGGING_H_
#define MTSA_TAGGING_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mtsa {

// Half-open token range [start, end) carrying a category label such as
// POS, NEG, cue or scope.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;

  std::size_t length() const { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

struct Sentence {
  std::vector<std::string> tokens;
  // Per-token tag strings; empty when the sentence is untagged.
  std::vector<std::string> tags;
  std::vector<Span> spans;
};

// kBioul and kBio encode spans with B/I/(L/U)/O prefixes. kPlain is a
// per-token label set without prefixes (UPOS, dependency relations); every
// token carries exactly one label.
enum class TagStyle { kBioul, kBio, kPlain };

enum class TagPrefix : char {
  kOutside = 'O',
  kBegin = 'B',
  kInside = 'I',
  kLast = 'L',
  kUnit = 'U',
  kNone = '-',  // plain labels
};

const char* TagStyleName(TagStyle style);
// Accepts "bioul", "bio" or "plain" (case-insensitive).
TagStyle ParseTagStyle(std::string_view name);

// The tag alphabet of a task. Index 0 is O for prefixed styles; the
// prefixed tags follow category by category (B, I, L, U for BIOUL; B, I for
// BIO) in the order the categories were given.
class LabelScheme {
 public:
  struct TagInfo {
    TagPrefix prefix;
    int category;  // -1 for O
  };

  LabelScheme() = default;
  LabelScheme(TagStyle style, std::vector<std::string> categories);

  static LabelScheme Bioul(std::vector<std::string> categories) {
    return LabelScheme(TagStyle::kBioul, std::move(categories));
  }
  static LabelScheme Bio(std::vector<std::string> categories) {
    return LabelScheme(TagStyle::kBio, std::move(categories));
  }
  static LabelScheme Plain(std::vector<std::string> labels) {
    return LabelScheme(TagStyle::kPlain, std::move(labels));
  }
  // Collects the categories used by `tags` (sorted) and builds a scheme.
  static LabelScheme FromTagStrings(TagStyle style,
                                    const std::vector<std::string>& tags);

  TagStyle style() const { return style_; }
  const std::vector<std::string>& categories() const { return categories_; }
  const std::vector<std::string>& tags() const { return tags_; }
  std::size_t size() const { return tags_.size(); }

  // Index of a tag string; '-' and '_' are both accepted as the separator
  // ("B-POS", "B_cue"). Throws ParseError for tags outside the alphabet.
  int Index(std::string_view tag) const;
  const std::string& Name(int tag) const { return tags_.at(tag); }
  const TagInfo& Info(int tag) const { return info_.at(tag); }
  // -1 when the combination does not exist in this scheme.
  int TagFor(TagPrefix prefix, int category) const;
  int CategoryIndex(std::string_view category) const;
  int outside() const { return style_ == TagStyle::kPlain ? -1 : 0; }

  friend bool operator==(const LabelScheme& a, const LabelScheme& b) {
    return a.style_ == b.style_ && a.categories_ == b.categories_;
  }

 private:
  TagStyle style_ = TagStyle::kBioul;
  std::vector<std::string> categories_;
  std::vector<std::string> tags_;
  std::vector<TagInfo> info_;
  std::unordered_map<std::string, int> index_;
  std::unordered_map<std::string, int> category_index_;
};

// Expected tag count for a style and category count.
std::size_t TagCountFor(TagStyle style, std::size_t categories);

// Encodes spans over a sentence of `length` tokens. Throws DataError on
// overlapping or out-of-range spans (and, for plain schemes, on spans
// longer than one token or uncovered tokens); `context` names the sentence
// in the message.
std::vector<int> SpansToTags(const std::vector<Span>& spans,
                             std::size_t length, const LabelScheme& scheme,
                             std::string_view context = "");

struct DecodedSpans {
  std::vector<Span> spans;
  std::size_t repairs = 0;
};

// Inverse of SpansToTags. Invalid sequences are repaired first and the
// number of rewritten positions is reported.
DecodedSpans TagsToSpans(const std::vector<int>& tags,
                         const LabelScheme& scheme);

// Deterministic left-to-right repair into a valid sequence. An I or L
// without a compatible open span starts a new span (becomes B); a span that
// is not closed properly ends on L, and a one-token span becomes U (BIOUL).
// Valid input is returned unchanged, so the repair is idempotent.
std::vector<int> RepairTags(const std::vector<int>& tags,
                            const LabelScheme& scheme,
                            std::size_t* repairs = nullptr);

bool IsValidTagSequence(const std::vector<int>& tags,
                        const LabelScheme& scheme);

std::vector<int> TagIndices(const std::vector<std::string>& tags,
                            const LabelScheme& scheme);
std::vector<std::string> TagNames(const std::vector<int>& tags,
                                  const LabelScheme& scheme);

// Spans of a tagged sentence under `scheme`.
std::vector<Span> SentenceSpans(const Sentence& sentence,
                                const LabelScheme& scheme);

}  // namespace mtsa

#endif  // MTSA_TAGGING_H_
