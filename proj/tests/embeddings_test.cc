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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "gtest/gtest.h"
#include "mtsa/embeddings.h"
#include "mtsa/errors.h"
#include "mtsa/numcore/optim.h"
#include "mtsa/numcore/rng.h"

namespace mtsa {
namespace {

std::string WriteTemp(const std::string& name, const std::string& text) {
  const std::string path =
      (std::filesystem::path(::testing::TempDir()) / name).string();
  std::ofstream(path) << text;
  return path;
}

TEST(StaticEmbeddingsTest, FilteredLoadAndMeanOov) {
  const std::string path = WriteTemp(
      "emb_a.txt", "food 1 2 3\nservice 3 4 5\nunused 100 100 100\n");
  const std::unordered_set<std::string> filter = {"food", "service"};
  const StaticEmbeddingTable t = LoadStaticEmbeddings(path, &filter);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.dim(), 3u);
  EXPECT_EQ(t.vectors().rows(), 3u);
  const Matrix oov = t.Lookup(std::vector<std::string>{"unused"});
  EXPECT_EQ(oov, (Matrix{{2, 3, 4}}));
}

TEST(StaticEmbeddingsTest, LookupRowsMatchFile) {
  const std::string path =
      WriteTemp("emb_b.txt", "the 0.5 -1 2\nFood 1 1 1\npizza 9 8 7\n");
  const StaticEmbeddingTable t = LoadStaticEmbeddings(path);
  const std::vector<std::string> tokens = {"pizza", "the", "mystery"};
  const Matrix m = t.Lookup(tokens);
  ASSERT_EQ(m.rows(), 3u);
  EXPECT_EQ(m(0, 0), 9.0);
  EXPECT_EQ(m(1, 0), 0.5);
  EXPECT_EQ(m(1, 1), -1.0);
  EXPECT_EQ(t.Index("mystery"), t.oov_index());
  EXPECT_NE(t.Index("Food"), t.oov_index());
  EXPECT_EQ(t.Index("PIZZA"), t.Index("pizza"));
  EXPECT_THROW(t.Lookup(std::vector<std::string>{}), DomainError);
}

TEST(StaticEmbeddingsTest, Errors) {
  const std::string bad = WriteTemp("emb_bad.txt", "a 1 2\nb 1 x\n");
  try {
    LoadStaticEmbeddings(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  const std::string ragged = WriteTemp("emb_ragged.txt", "a 1 2\nb 1 2 3\n");
  EXPECT_THROW(LoadStaticEmbeddings(ragged), ParseError);
  const std::string path = WriteTemp("emb_c.txt", "a 1 2\n");
  const std::unordered_set<std::string> none = {"zzz"};
  EXPECT_THROW(LoadStaticEmbeddings(path, &none), DataError);
  EXPECT_THROW(LoadStaticEmbeddings(path, nullptr, 5), ParseError);
}

TEST(ContextualStackTest, ShapeAndRoundTrip) {
  const std::string path =
      WriteTemp("ctx_a.txt", "#contextual 2 3\n1 2 3 4 5 6\n");
  const ContextualStack s = LoadContextualStack(path);
  EXPECT_EQ(s.num_layers, 2u);
  EXPECT_EQ(s.dim, 3u);
  ASSERT_EQ(s.sentences.size(), 1u);
  EXPECT_EQ(s.sentences[0].layers[1], (Matrix{{4, 5, 6}}));

  SeededRng rng(3);
  ContextualStack big{3, 2, {}};
  for (std::size_t n : {2u, 4u}) {
    ContextualSentence cs;
    for (int l = 0; l < 3; ++l) {
      Matrix m(n, 2);
      for (double& v : m.values()) v = rng.Normal() / 3.0;
      cs.layers.push_back(m);
    }
    big.sentences.push_back(cs);
  }
  const std::string out =
      (std::filesystem::path(::testing::TempDir()) / "ctx_rt.txt").string();
  WriteContextualStack(out, big);
  const ContextualStack back = LoadContextualStack(out);
  ASSERT_EQ(back.sentences.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t l = 0; l < 3; ++l) {
      EXPECT_EQ(back.sentences[i].layers[l], big.sentences[i].layers[l]);
    }
  }
}

TEST(ContextualStackTest, MissingTokenIsAlignmentError) {
  const std::string path =
      WriteTemp("ctx_b.txt", "#contextual 1 2\n1 2\n3 4\n\n5 6\n");
  const std::vector<std::size_t> lengths = {3, 1};
  try {
    LoadContextualStack(path, &lengths);
    FAIL();
  } catch (const AlignmentError& e) {
    EXPECT_EQ(e.sentence(), 0u);
  }
}

ContextualSentence ThreeLayers(SeededRng& rng, std::size_t n, std::size_t d) {
  ContextualSentence cs;
  for (int l = 0; l < 3; ++l) {
    Matrix m(n, d);
    for (double& v : m.values()) v = rng.Normal();
    cs.layers.push_back(m);
  }
  return cs;
}

TEST(ScalarMixTest, EqualLogitsAverage) {
  SeededRng rng(4);
  const ContextualSentence cs = ThreeLayers(rng, 2, 4);
  ScalarMix mix(3);
  const Matrix out = mix.Forward(cs);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double mean =
        (cs.layers[0][i] + cs.layers[1][i] + cs.layers[2][i]) / 3.0;
    EXPECT_NEAR(out[i], mean, 1e-15);
  }
  EXPECT_THROW(ScalarMix(2).Forward(cs), ShapeError);
}

TEST(ScalarMixTest, SaturatedLogitSelectsLayer) {
  SeededRng rng(5);
  const ContextualSentence cs = ThreeLayers(rng, 2, 4);
  ScalarMix mix(3);
  mix.logits.value = Matrix{{-40, 40, -40}};
  const Matrix out = mix.Forward(cs);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_NEAR(out[i], cs.layers[1][i], 1e-12);
  }
}

TEST(ScalarMixTest, GradientsMatchFiniteDifferences) {
  SeededRng rng(6);
  const ContextualSentence cs = ThreeLayers(rng, 2, 4);
  ScalarMix mix(3);
  mix.logits.value = Matrix{{0.3, -1.2, 0.8}};
  mix.gamma.value[0] = 1.7;
  Matrix weights(2, 4);
  for (double& v : weights.values()) v = rng.Normal();
  auto loss = [&] {
    const Matrix out = mix.Forward(cs);
    double s = 0;
    for (std::size_t i = 0; i < out.size(); ++i) s += weights[i] * out[i];
    return s;
  };
  ParamList params = {&mix.logits, &mix.gamma};
  ZeroGrads(params);
  mix.Backward(cs, weights);
  const auto r = FiniteDiffCheck(loss, params);
  EXPECT_LT(r.max_relative_error, 1e-6) << r.worst;
  EXPECT_FALSE(mix.logits.regularized);
  EXPECT_FALSE(mix.gamma.regularized);
}

}  // namespace
}  // namespace mtsa
