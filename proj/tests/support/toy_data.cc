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

#include "support/toy_data.h"

#include <set>

#include "mtsa/numcore/rng.h"

namespace mtsa::testing {
namespace {

const std::vector<std::vector<std::string>> kTargets = {
    {"food"},    {"service"}, {"staff"},   {"pizza"},  {"wine", "list"},
    {"battery", "life"},      {"screen"},  {"price"},  {"keyboard"},
    {"delivery", "time"}};

struct Cue {
  const char* word;
  const char* label;
};

const std::vector<Cue> kCues = {
    {"great", "POS"},   {"excellent", "POS"}, {"lovely", "POS"},
    {"awful", "NEG"},   {"terrible", "NEG"},  {"bad", "NEG"},
    {"okay", "NEU"},    {"average", "NEU"},   {"fine", "NEU"}};

const std::vector<std::string> kFillers = {"the", "was", "and", "but",
                                           "really", "i", "think", "."};

}  // namespace

std::vector<Sentence> ToySentences(std::size_t n, std::uint64_t seed) {
  SeededRng rng(seed);
  const LabelScheme scheme = LabelScheme::Bioul({"POS", "NEU", "NEG"});
  std::vector<Sentence> out;
  for (std::size_t i = 0; i < n; ++i) {
    Sentence s;
    if (rng.Below(2) == 1) {
      s.tokens = {"i", "think"};
    }
    const std::size_t clauses = 1 + rng.Below(2);
    for (std::size_t c = 0; c < clauses; ++c) {
      if (c > 0) s.tokens.push_back(rng.Below(2) == 0 ? "and" : "but");
      s.tokens.push_back("the");
      const auto& target = kTargets[rng.Below(kTargets.size())];
      const Cue& cue = kCues[rng.Below(kCues.size())];
      const std::size_t start = s.tokens.size();
      s.tokens.insert(s.tokens.end(), target.begin(), target.end());
      s.spans.push_back({start, s.tokens.size(), cue.label});
      s.tokens.push_back("was");
      if (rng.Below(3) == 0) s.tokens.push_back("really");
      s.tokens.push_back(cue.word);
    }
    s.tokens.push_back(".");
    s.tags = TagNames(SpansToTags(s.spans, s.tokens.size(), scheme), scheme);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Sentence> ToyAuxSentences(const std::vector<Sentence>& main) {
  const LabelScheme scheme = LabelScheme::Bio({"cue", "scope"});
  std::set<std::string> cue_words;
  for (const Cue& c : kCues) cue_words.insert(c.word);
  std::vector<Sentence> out;
  for (const Sentence& m : main) {
    Sentence s;
    s.tokens = m.tokens;
    for (const Span& sp : m.spans) s.spans.push_back({sp.start, sp.end, "scope"});
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (cue_words.contains(s.tokens[i])) s.spans.push_back({i, i + 1, "cue"});
    }
    s.tags = TagNames(SpansToTags(s.spans, s.tokens.size(), scheme), scheme);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> ToyVocabulary() {
  std::set<std::string> words(kFillers.begin(), kFillers.end());
  for (const auto& t : kTargets) words.insert(t.begin(), t.end());
  for (const Cue& c : kCues) words.insert(c.word);
  return {words.begin(), words.end()};
}

std::shared_ptr<const StaticEmbeddingTable> ToyEmbeddings(std::size_t dim,
                                                          std::uint64_t seed) {
  SeededRng rng(seed);
  const std::vector<std::string> words = ToyVocabulary();
  Matrix vectors(words.size(), dim);
  for (double& v : vectors.values()) v = 0.4 * rng.Normal();
  return std::make_shared<const StaticEmbeddingTable>(words, vectors);
}

ContextualStack ToyContextualStack(const std::vector<Sentence>& sentences,
                                   std::size_t layers, std::size_t dim,
                                   std::uint64_t seed) {
  SeededRng rng(seed);
  ContextualStack stack{layers, dim, {}};
  for (const Sentence& s : sentences) {
    ContextualSentence cs;
    for (std::size_t l = 0; l < layers; ++l) {
      Matrix m(s.tokens.size(), dim);
      for (double& v : m.values()) v = rng.Normal();
      cs.layers.push_back(std::move(m));
    }
    stack.sentences.push_back(std::move(cs));
  }
  return stack;
}

ModelConfig SmallConfig(std::size_t dim, bool mtl) {
  ModelConfig c;
  c.embedding_dim = dim;
  c.hidden1 = 6;
  c.hidden2 = 5;
  c.dropout = 0.0;
  if (mtl) c.aux_scheme = LabelScheme::Bio({"cue", "scope"});
  return c;
}

}  // namespace mtsa::testing
