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

#include "mtsa/tagging.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "mtsa/errors.h"

namespace mtsa {
namespace {

std::string Where(std::string_view context) {
  return context.empty() ? std::string() : std::string(context) + ": ";
}

}  // namespace

const char* TagStyleName(TagStyle style) {
  switch (style) {
    case TagStyle::kBioul:
      return "bioul";
    case TagStyle::kBio:
      return "bio";
    case TagStyle::kPlain:
      return "plain";
  }
  return "?";
}

TagStyle ParseTagStyle(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(c));
  if (lower == "bioul") return TagStyle::kBioul;
  if (lower == "bio") return TagStyle::kBio;
  if (lower == "plain") return TagStyle::kPlain;
  throw ConfigError("unknown tag style '" + std::string(name) + "'");
}

std::size_t TagCountFor(TagStyle style, std::size_t categories) {
  switch (style) {
    case TagStyle::kBioul:
      return 1 + 4 * categories;
    case TagStyle::kBio:
      return 1 + 2 * categories;
    case TagStyle::kPlain:
      return categories;
  }
  return 0;
}

LabelScheme::LabelScheme(TagStyle style, std::vector<std::string> categories)
    : style_(style), categories_(std::move(categories)) {
  if (categories_.empty()) throw ConfigError("label scheme needs a category");
  for (std::size_t c = 0; c < categories_.size(); ++c) {
    if (categories_[c].empty()) throw ConfigError("empty category name");
    if (!category_index_.emplace(categories_[c], static_cast<int>(c)).second) {
      throw ConfigError("duplicate category '" + categories_[c] + "'");
    }
  }
  auto add = [this](std::string name, TagPrefix prefix, int category) {
    index_.emplace(name, static_cast<int>(tags_.size()));
    tags_.push_back(std::move(name));
    info_.push_back({prefix, category});
  };
  if (style_ == TagStyle::kPlain) {
    for (std::size_t c = 0; c < categories_.size(); ++c) {
      add(categories_[c], TagPrefix::kNone, static_cast<int>(c));
    }
    return;
  }
  add("O", TagPrefix::kOutside, -1);
  const std::vector<TagPrefix> prefixes =
      style_ == TagStyle::kBioul
          ? std::vector<TagPrefix>{TagPrefix::kBegin, TagPrefix::kInside,
                                   TagPrefix::kLast, TagPrefix::kUnit}
          : std::vector<TagPrefix>{TagPrefix::kBegin, TagPrefix::kInside};
  for (std::size_t c = 0; c < categories_.size(); ++c) {
    for (TagPrefix p : prefixes) {
      add(std::string(1, static_cast<char>(p)) + "-" + categories_[c], p,
          static_cast<int>(c));
    }
  }
}

LabelScheme LabelScheme::FromTagStrings(TagStyle style,
                                        const std::vector<std::string>& tags) {
  std::set<std::string> cats;
  for (const std::string& t : tags) {
    if (style == TagStyle::kPlain) {
      cats.insert(t);
    } else if (t != "O") {
      if (t.size() < 3 || (t[1] != '-' && t[1] != '_')) {
        throw ParseError("malformed tag '" + t + "'");
      }
      cats.insert(t.substr(2));
    }
  }
  if (cats.empty()) {
    throw DataError("no span categories found in tag data");
  }
  return LabelScheme(style, std::vector<std::string>(cats.begin(), cats.end()));
}

int LabelScheme::Index(std::string_view tag) const {
  if (style_ != TagStyle::kPlain && tag.size() >= 3 && tag[1] == '_') {
    std::string canonical(tag);
    canonical[1] = '-';
    auto it = index_.find(canonical);
    if (it != index_.end()) return it->second;
  } else {
    auto it = index_.find(std::string(tag));
    if (it != index_.end()) return it->second;
  }
  throw ParseError("tag '" + std::string(tag) + "' is not in the " +
                   TagStyleName(style_) + " scheme");
}

int LabelScheme::TagFor(TagPrefix prefix, int category) const {
  if (prefix == TagPrefix::kOutside) return outside();
  if (category < 0 || category >= static_cast<int>(categories_.size())) {
    return -1;
  }
  switch (style_) {
    case TagStyle::kPlain:
      return prefix == TagPrefix::kNone ? category : -1;
    case TagStyle::kBio:
      if (prefix == TagPrefix::kBegin) return 1 + 2 * category;
      if (prefix == TagPrefix::kInside) return 2 + 2 * category;
      return -1;
    case TagStyle::kBioul:
      switch (prefix) {
        case TagPrefix::kBegin:
          return 1 + 4 * category;
        case TagPrefix::kInside:
          return 2 + 4 * category;
        case TagPrefix::kLast:
          return 3 + 4 * category;
        case TagPrefix::kUnit:
          return 4 + 4 * category;
        default:
          return -1;
      }
  }
  return -1;
}

int LabelScheme::CategoryIndex(std::string_view category) const {
  auto it = category_index_.find(std::string(category));
  return it == category_index_.end() ? -1 : it->second;
}

std::vector<int> SpansToTags(const std::vector<Span>& spans,
                             std::size_t length, const LabelScheme& scheme,
                             std::string_view context) {
  std::vector<Span> sorted = spans;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const Span& s = sorted[k];
    if (s.start >= s.end || s.end > length) {
      throw DataError(Where(context) + "span [" + std::to_string(s.start) +
                      ", " + std::to_string(s.end) + ") out of range for " +
                      std::to_string(length) + " tokens");
    }
    if (k > 0 && s.start < sorted[k - 1].end) {
      throw DataError(Where(context) + "overlapping spans at token " +
                      std::to_string(s.start));
    }
    if (scheme.CategoryIndex(s.label) < 0) {
      throw DataError(Where(context) + "category '" + s.label +
                      "' is not in the scheme");
    }
  }

  if (scheme.style() == TagStyle::kPlain) {
    std::vector<int> tags(length, -1);
    for (const Span& s : sorted) {
      if (s.length() != 1) {
        throw DataError(Where(context) +
                        "plain label spans must cover exactly one token");
      }
      tags[s.start] = scheme.CategoryIndex(s.label);
    }
    for (std::size_t i = 0; i < length; ++i) {
      if (tags[i] < 0) {
        throw DataError(Where(context) + "token " + std::to_string(i) +
                        " has no label");
      }
    }
    return tags;
  }

  std::vector<int> tags(length, scheme.outside());
  const bool bioul = scheme.style() == TagStyle::kBioul;
  for (const Span& s : sorted) {
    const int c = scheme.CategoryIndex(s.label);
    if (s.length() == 1) {
      tags[s.start] = scheme.TagFor(bioul ? TagPrefix::kUnit : TagPrefix::kBegin, c);
      continue;
    }
    tags[s.start] = scheme.TagFor(TagPrefix::kBegin, c);
    for (std::size_t i = s.start + 1; i < s.end; ++i) {
      tags[i] = scheme.TagFor(TagPrefix::kInside, c);
    }
    if (bioul) tags[s.end - 1] = scheme.TagFor(TagPrefix::kLast, c);
  }
  return tags;
}

std::vector<int> RepairTags(const std::vector<int>& tags,
                            const LabelScheme& scheme, std::size_t* repairs) {
  std::vector<int> out = tags;
  if (scheme.style() == TagStyle::kBioul) {
    int open = -1;
    std::size_t start = 0;
    auto close = [&](std::size_t end) {
      if (end - start == 1) {
        out[start] = scheme.TagFor(TagPrefix::kUnit, open);
      } else {
        out[end - 1] = scheme.TagFor(TagPrefix::kLast, open);
      }
      open = -1;
    };
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& info = scheme.Info(tags[i]);
      const int c = info.category;
      switch (info.prefix) {
        case TagPrefix::kOutside:
          if (open >= 0) close(i);
          break;
        case TagPrefix::kBegin:
          if (open >= 0) close(i);
          open = c;
          start = i;
          break;
        case TagPrefix::kInside:
          if (open == c) break;
          if (open >= 0) close(i);
          out[i] = scheme.TagFor(TagPrefix::kBegin, c);
          open = c;
          start = i;
          break;
        case TagPrefix::kLast:
          if (open == c) {
            open = -1;
            break;
          }
          if (open >= 0) close(i);
          out[i] = scheme.TagFor(TagPrefix::kBegin, c);
          open = c;
          start = i;
          break;
        case TagPrefix::kUnit:
          if (open >= 0) close(i);
          break;
        case TagPrefix::kNone:
          break;
      }
    }
    if (open >= 0) close(out.size());
  } else if (scheme.style() == TagStyle::kBio) {
    int open = -1;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& info = scheme.Info(tags[i]);
      switch (info.prefix) {
        case TagPrefix::kBegin:
          open = info.category;
          break;
        case TagPrefix::kInside:
          if (open != info.category) {
            out[i] = scheme.TagFor(TagPrefix::kBegin, info.category);
            open = info.category;
          }
          break;
        default:
          open = -1;
          break;
      }
    }
  }
  if (repairs != nullptr) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < out.size(); ++i) changed += out[i] != tags[i];
    *repairs = changed;
  }
  return out;
}

bool IsValidTagSequence(const std::vector<int>& tags,
                        const LabelScheme& scheme) {
  std::size_t repairs = 0;
  RepairTags(tags, scheme, &repairs);
  return repairs == 0;
}

DecodedSpans TagsToSpans(const std::vector<int>& tags,
                         const LabelScheme& scheme) {
  for (int t : tags) {
    if (t < 0 || t >= static_cast<int>(scheme.size())) {
      throw ParseError("tag index " + std::to_string(t) + " out of range");
    }
  }
  DecodedSpans result;
  const std::vector<int> valid = RepairTags(tags, scheme, &result.repairs);
  const auto& cats = scheme.categories();
  if (scheme.style() == TagStyle::kPlain) {
    for (std::size_t i = 0; i < valid.size(); ++i) {
      result.spans.push_back({i, i + 1, cats[valid[i]]});
    }
    return result;
  }
  std::size_t start = 0;
  int open = -1;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    const auto& info = scheme.Info(valid[i]);
    switch (info.prefix) {
      case TagPrefix::kUnit:
        result.spans.push_back({i, i + 1, cats[info.category]});
        break;
      case TagPrefix::kBegin:
        if (open >= 0) result.spans.push_back({start, i, cats[open]});
        open = info.category;
        start = i;
        break;
      case TagPrefix::kLast:
        result.spans.push_back({start, i + 1, cats[open]});
        open = -1;
        break;
      case TagPrefix::kOutside:
        if (open >= 0) result.spans.push_back({start, i, cats[open]});
        open = -1;
        break;
      default:
        break;
    }
  }
  if (open >= 0) result.spans.push_back({start, valid.size(), cats[open]});
  return result;
}

std::vector<int> TagIndices(const std::vector<std::string>& tags,
                            const LabelScheme& scheme) {
  std::vector<int> out;
  out.reserve(tags.size());
  for (const std::string& t : tags) out.push_back(scheme.Index(t));
  return out;
}

std::vector<std::string> TagNames(const std::vector<int>& tags,
                                  const LabelScheme& scheme) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  for (int t : tags) out.push_back(scheme.Name(t));
  return out;
}

std::vector<Span> SentenceSpans(const Sentence& sentence,
                                const LabelScheme& scheme) {
  if (sentence.tags.empty()) return sentence.spans;
  return TagsToSpans(TagIndices(sentence.tags, scheme), scheme).spans;
}

}  // namespace mtsa
