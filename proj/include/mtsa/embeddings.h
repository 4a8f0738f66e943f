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

#ifndef MTSA_EMBEDDINGS_H_
#define MTSA_EMBEDDINGS_H_

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mtsa/numcore/matrix.h"
#include "mtsa/numcore/optim.h"

namespace mtsa {

// Frozen word vectors. Row `size()` of vectors() is the out-of-vocabulary
// vector. The table is never handed to an optimizer.
class StaticEmbeddingTable {
 public:
  // `vectors` has one row per word; the OOV row is their column mean.
  StaticEmbeddingTable(std::vector<std::string> words, const Matrix& vectors);
  // `vectors_with_oov` already carries the OOV row last.
  static StaticEmbeddingTable FromRowsWithOov(std::vector<std::string> words,
                                              Matrix vectors_with_oov);

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return vectors_.cols(); }
  std::size_t oov_index() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const Matrix& vectors() const { return vectors_; }

  // Exact match first, then the ASCII-lowercased token; OOV otherwise.
  std::size_t Index(const std::string& token) const;
  // n x dim matrix of token rows. Throws DomainError on an empty sequence.
  Matrix Lookup(std::span<const std::string> tokens) const;

 private:
  StaticEmbeddingTable() = default;
  void BuildIndex();

  std::vector<std::string> words_;
  Matrix vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

std::string AsciiLower(std::string s);

// Reads "word v1 ... vd" lines (whitespace separated). Only words in
// `vocab_filter` (or whose form equals a lowercased filter word) are kept;
// a null filter keeps everything. The first line fixes d unless
// `expected_dim` is non-zero. Throws ParseError (with line number) on
// malformed lines and DataError when nothing survives the filter.
StaticEmbeddingTable LoadStaticEmbeddings(
    const std::string& path,
    const std::unordered_set<std::string>* vocab_filter = nullptr,
    std::size_t expected_dim = 0);

// Precomputed layer activations of a frozen contextual encoder for one
// sentence: layers[l] is n x dim.
struct ContextualSentence {
  std::vector<Matrix> layers;

  std::size_t num_layers() const { return layers.size(); }
  std::size_t tokens() const { return layers.empty() ? 0 : layers[0].rows(); }
  std::size_t dim() const { return layers.empty() ? 0 : layers[0].cols(); }
};

struct ContextualStack {
  std::size_t num_layers = 0;
  std::size_t dim = 0;
  std::vector<ContextualSentence> sentences;
};

// Text layout:
//   #contextual <num_layers> <dim>
//   one line per token: num_layers * dim numbers, layer 0 first
//   a blank line between sentences
// When `expected_lengths` is given, sentence and token counts must match it
// or an AlignmentError naming the first bad sentence is thrown.
ContextualStack LoadContextualStack(
    const std::string& path,
    const std::vector<std::size_t>* expected_lengths = nullptr);
void WriteContextualStack(const std::string& path,
                          const ContextualStack& stack);

// gamma * sum_j softmax(s)_j * layer_j over a contextual stack.
class ScalarMix {
 public:
  ScalarMix() = default;
  explicit ScalarMix(std::size_t num_layers);

  std::size_t num_layers() const { return logits.value.cols(); }
  std::vector<double> Weights() const;

  // Throws ShapeError when the sentence's layer count differs.
  Matrix Forward(const ContextualSentence& sentence) const;
  // Accumulates d(loss)/d(logits) and d(loss)/d(gamma) given d(loss)/d(out).
  void Backward(const ContextualSentence& sentence, const Matrix& d_out);

  Parameter logits;  // 1 x L, starts at zero
  Parameter gamma;   // 1 x 1, starts at one
};

}  // namespace mtsa

#endif  // MTSA_EMBEDDINGS_H_
