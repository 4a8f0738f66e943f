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

#include <algorithm>
#include <sstream>
#include <vector>

#include "gtest/gtest.h"
#include "mtsa/conll.h"
#include "mtsa/errors.h"
#include "mtsa/numcore/rng.h"
#include "mtsa/tagging.h"

namespace mtsa {
namespace {

const LabelScheme& Sentiment() {
  static const LabelScheme s = LabelScheme::Bioul({"POS", "NEU", "NEG"});
  return s;
}

std::vector<std::string> Names(const std::vector<int>& tags,
                               const LabelScheme& s) {
  return TagNames(tags, s);
}

TEST(LabelSchemeTest, SentimentAlphabet) {
  const LabelScheme& s = Sentiment();
  EXPECT_EQ(s.size(), 13u);
  EXPECT_EQ(s.Name(0), "O");
  EXPECT_EQ(s.Name(1), "B-POS");
  EXPECT_EQ(s.Name(4), "U-POS");
  EXPECT_EQ(s.Index("L-NEG"), 11);
  EXPECT_EQ(s.Index("L_NEG"), 11);
  EXPECT_THROW(s.Index("X-POS"), ParseError);
  EXPECT_THROW(s.Index("B-BOTH"), ParseError);
}

TEST(LabelSchemeTest, SizesFollowStyle) {
  EXPECT_EQ(TagCountFor(TagStyle::kBioul, 3), 13u);
  EXPECT_EQ(TagCountFor(TagStyle::kBio, 2), 5u);
  EXPECT_EQ(TagCountFor(TagStyle::kPlain, 17), 17u);
  EXPECT_EQ(LabelScheme::Bio({"cue", "scope"}).size(), 5u);
  EXPECT_THROW(LabelScheme::Bio({}), ConfigError);
  EXPECT_THROW(LabelScheme::Bio({"a", "a"}), ConfigError);
  EXPECT_THROW(ParseTagStyle("iobes"), ConfigError);
}

TEST(LabelSchemeTest, FromTagStringsSortsCategories) {
  const LabelScheme s = LabelScheme::FromTagStrings(
      TagStyle::kBio, {"O", "B_scope", "I_scope", "B_cue"});
  EXPECT_EQ(s.categories(), (std::vector<std::string>{"cue", "scope"}));
}

TEST(SpansToTagsTest, Definitions) {
  const LabelScheme& s = Sentiment();
  EXPECT_EQ(Names(SpansToTags({}, 3, s), s),
            (std::vector<std::string>{"O", "O", "O"}));
  EXPECT_EQ(Names(SpansToTags({{2, 3, "POS"}}, 5, s), s),
            (std::vector<std::string>{"O", "O", "U-POS", "O", "O"}));
  EXPECT_EQ(Names(SpansToTags({{0, 3, "NEG"}}, 3, s), s),
            (std::vector<std::string>{"B-NEG", "I-NEG", "L-NEG"}));
  const LabelScheme bio = LabelScheme::Bio({"NEG"});
  EXPECT_EQ(Names(SpansToTags({{0, 3, "NEG"}}, 3, bio), bio),
            (std::vector<std::string>{"B-NEG", "I-NEG", "I-NEG"}));
}

TEST(SpansToTagsTest, Errors) {
  const LabelScheme& s = Sentiment();
  EXPECT_THROW(SpansToTags({{0, 2, "POS"}, {1, 3, "NEG"}}, 4, s), DataError);
  EXPECT_THROW(SpansToTags({{2, 5, "POS"}}, 4, s), DataError);
  EXPECT_THROW(SpansToTags({{1, 1, "POS"}}, 4, s), DataError);
  EXPECT_THROW(SpansToTags({{0, 1, "BOTH"}}, 4, s), DataError);
}

TEST(TagsToSpansTest, Basics) {
  const LabelScheme& s = Sentiment();
  EXPECT_TRUE(TagsToSpans(TagIndices({"O", "O"}, s), s).spans.empty());
  const auto d = TagsToSpans(TagIndices({"U-POS", "U-NEG"}, s), s);
  EXPECT_EQ(d.spans, (std::vector<Span>{{0, 1, "POS"}, {1, 2, "NEG"}}));
  EXPECT_EQ(d.repairs, 0u);
}

TEST(RepairTest, LoneInsideBecomesUnit) {
  const LabelScheme& s = Sentiment();
  std::size_t repairs = 0;
  const auto fixed = RepairTags(TagIndices({"I-POS"}, s), s, &repairs);
  EXPECT_EQ(Names(fixed, s), (std::vector<std::string>{"U-POS"}));
  EXPECT_GT(repairs, 0u);
}

TEST(RepairTest, UnclosedSpanAndCategorySwitch) {
  const LabelScheme& s = Sentiment();
  EXPECT_EQ(Names(RepairTags(TagIndices({"B-POS", "I-POS", "O"}, s), s), s),
            (std::vector<std::string>{"B-POS", "L-POS", "O"}));
  EXPECT_EQ(Names(RepairTags(TagIndices({"B-POS", "I-NEG", "L-NEG"}, s), s),
                  s),
            (std::vector<std::string>{"U-POS", "B-NEG", "L-NEG"}));
  EXPECT_EQ(Names(RepairTags(TagIndices({"O", "L-NEU"}, s), s), s),
            (std::vector<std::string>{"O", "U-NEU"}));
}

TEST(RepairTest, ValidSequenceUnchanged) {
  const LabelScheme& s = Sentiment();
  const auto tags = TagIndices({"B-POS", "I-POS", "L-POS", "O", "U-NEG"}, s);
  std::size_t repairs = 7;
  EXPECT_EQ(RepairTags(tags, s, &repairs), tags);
  EXPECT_EQ(repairs, 0u);
  EXPECT_TRUE(IsValidTagSequence(tags, s));
}

TEST(RepairTest, BioOrphanInside) {
  const LabelScheme s = LabelScheme::Bio({"cue", "scope"});
  EXPECT_EQ(Names(RepairTags(TagIndices({"O", "I-cue", "I-scope"}, s), s), s),
            (std::vector<std::string>{"O", "B-cue", "B-scope"}));
}

std::vector<Span> RandomSpans(SeededRng& rng, std::size_t n,
                              const std::vector<std::string>& cats) {
  std::vector<Span> spans;
  std::size_t i = 0;
  while (i < n) {
    if (rng.Below(3) == 0) {
      ++i;
      continue;
    }
    const std::size_t len = 1 + rng.Below(std::min<std::size_t>(4, n - i));
    spans.push_back({i, i + len, cats[rng.Below(cats.size())]});
    i += len;
  }
  return spans;
}

TEST(TaggingPropertyTest, RoundTripRandomSpans) {
  SeededRng rng(123);
  for (const TagStyle style : {TagStyle::kBioul, TagStyle::kBio}) {
    const LabelScheme s(style, {"POS", "NEU", "NEG"});
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + rng.Below(15);
      const auto spans = RandomSpans(rng, n, s.categories());
      const auto tags = SpansToTags(spans, n, s);
      ASSERT_TRUE(IsValidTagSequence(tags, s));
      const auto back = TagsToSpans(tags, s);
      ASSERT_EQ(back.spans, spans);
      ASSERT_EQ(back.repairs, 0u);
    }
  }
}

TEST(TaggingPropertyTest, RepairIsIdempotentAndValid) {
  SeededRng rng(321);
  for (const TagStyle style : {TagStyle::kBioul, TagStyle::kBio}) {
    const LabelScheme s(style, {"POS", "NEU", "NEG"});
    for (int trial = 0; trial < 10000; ++trial) {
      std::vector<int> tags(1 + rng.Below(10));
      for (int& t : tags) t = static_cast<int>(rng.Below(s.size()));
      const auto once = RepairTags(tags, s);
      ASSERT_TRUE(IsValidTagSequence(once, s));
      ASSERT_EQ(RepairTags(once, s), once);
    }
  }
}

TEST(PlainStyleTest, EveryTokenIsASpan) {
  const LabelScheme s = LabelScheme::Plain({"AUX", "DET", "NOUN"});
  EXPECT_EQ(s.outside(), -1);
  const auto tags = TagIndices({"DET", "NOUN", "AUX"}, s);
  const auto spans = TagsToSpans(tags, s).spans;
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(spans[1], (Span{1, 2, "NOUN"}));
  EXPECT_EQ(SpansToTags(spans, 3, s), tags);
  EXPECT_THROW(SpansToTags({{0, 2, "DET"}, {2, 3, "AUX"}}, 3, s), DataError);
}

TEST(ConllTest, TwoSentenceRoundTrip) {
  std::vector<Sentence> in(2);
  in[0].tokens = {"the", "battery", "life"};
  in[0].tags = {"O", "B-POS", "L-POS"};
  in[1].tokens = {"bad"};
  in[1].tags = {"O"};
  std::ostringstream out;
  FormatConll(out, in);
  std::istringstream back(out.str());
  const auto parsed = ParseConll(back);
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed[0].tokens, in[0].tokens);
  EXPECT_EQ(parsed[0].tags, in[0].tags);
  EXPECT_EQ(parsed[1].tags, in[1].tags);
  EXPECT_EQ(out.str().back(), '\n');
}

TEST(ConllTest, NegationToyRow) {
  std::istringstream in(
      "# toy\nyou\tB_scope\nmight\tI_scope\nnot\tB_cue\nlike\tB_scope\n"
      "the\tI_scope\nservice\tI_scope\n");
  const auto sents = ParseConll(in);
  ASSERT_EQ(sents.size(), 1u);
  EXPECT_EQ(sents[0].tags[2], "B_cue");
  const LabelScheme s =
      LabelScheme::FromTagStrings(TagStyle::kBio, sents[0].tags);
  EXPECT_EQ(s.size(), 5u);
  EXPECT_EQ(SentenceSpans(sents[0], s),
            (std::vector<Span>{{0, 2, "scope"}, {2, 3, "cue"}, {3, 6, "scope"}}));
}

TEST(ConllTest, UposAndDependencyRowsArePlainLabels) {
  std::istringstream upos(
      "you\tPRON\nmight\tAUX\nnot\tPART\nlike\tVERB\nthe\tDET\nservice\tNOUN\n");
  const auto u = ParseConll(upos);
  const LabelScheme us = LabelScheme::FromTagStrings(TagStyle::kPlain, u[0].tags);
  EXPECT_EQ(us.size(), 6u);
  EXPECT_EQ(SentenceSpans(u[0], us).size(), 6u);
  std::istringstream dr(
      "you\tnsubj\nmight\taux\nnot\tadvmod\nlike\troot\nthe\tdet\nservice\tobj\n");
  const auto d = ParseConll(dr);
  const LabelScheme ds = LabelScheme::FromTagStrings(TagStyle::kPlain, d[0].tags);
  EXPECT_EQ(ds.Name(ds.CategoryIndex("root")), "root");
}

TEST(ConllTest, MalformedLinesReportLineNumber) {
  std::istringstream in("good\tO\nbad\ttok\tO\n");
  try {
    ParseConll(in, "pred.conll");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("pred.conll"), std::string::npos);
  }
  std::istringstream one_field("token\n");
  EXPECT_THROW(ParseConll(one_field), ParseError);
  std::istringstream empty("\n\n# only comments\n");
  EXPECT_THROW(ParseConll(empty), DataError);
}

}  // namespace
}  // namespace mtsa
