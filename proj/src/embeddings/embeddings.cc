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

#include "mtsa/embeddings.h"

#include <algorithm>
#include <cmath>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mtsa/errors.h"
#include "mtsa/numcore/kernels.h"

namespace mtsa {
namespace {

// Splits on spaces and tabs.
std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool ParseDouble(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

std::string AsciiLower(std::string s) {
  for (char& c : s) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return s;
}

StaticEmbeddingTable::StaticEmbeddingTable(std::vector<std::string> words,
                                           const Matrix& vectors)
    : words_(std::move(words)) {
  if (words_.size() != vectors.rows()) {
    throw ShapeError("embedding table: word count does not match rows");
  }
  if (words_.empty()) throw DataError("embedding table is empty");
  const std::size_t d = vectors.cols();
  vectors_ = Matrix(words_.size() + 1, d);
  for (std::size_t r = 0; r < words_.size(); ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      vectors_(r, c) = vectors(r, c);
      vectors_(words_.size(), c) += vectors(r, c);
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    vectors_(words_.size(), c) /= static_cast<double>(words_.size());
  }
  BuildIndex();
}

StaticEmbeddingTable StaticEmbeddingTable::FromRowsWithOov(
    std::vector<std::string> words, Matrix vectors_with_oov) {
  if (vectors_with_oov.rows() != words.size() + 1) {
    throw ShapeError("embedding table: expected " +
                     std::to_string(words.size() + 1) + " rows, got " +
                     std::to_string(vectors_with_oov.rows()));
  }
  StaticEmbeddingTable t;
  t.words_ = std::move(words);
  t.vectors_ = std::move(vectors_with_oov);
  t.BuildIndex();
  return t;
}

void StaticEmbeddingTable::BuildIndex() {
  index_.clear();
  for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
}

std::size_t StaticEmbeddingTable::Index(const std::string& token) const {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  it = index_.find(AsciiLower(token));
  if (it != index_.end()) return it->second;
  return oov_index();
}

Matrix StaticEmbeddingTable::Lookup(std::span<const std::string> tokens) const {
  if (tokens.empty()) throw DomainError("embedding lookup of an empty sentence");
  Matrix out(tokens.size(), dim());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto src = vectors_.row(Index(tokens[i]));
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

StaticEmbeddingTable LoadStaticEmbeddings(
    const std::string& path,
    const std::unordered_set<std::string>* vocab_filter,
    std::size_t expected_dim) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::unordered_set<std::string> lowered;
  if (vocab_filter != nullptr) {
    for (const std::string& w : *vocab_filter) lowered.insert(AsciiLower(w));
  }
  std::size_t dim = expected_dim;
  std::vector<std::string> words;
  std::vector<double> values;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitFields(line);
    if (fields.size() < 2) {
      throw ParseError("expected a word followed by its vector", line_no, path);
    }
    if (dim == 0) dim = fields.size() - 1;
    if (fields.size() - 1 != dim) {
      throw ParseError("expected " + std::to_string(dim) + " values, found " +
                           std::to_string(fields.size() - 1),
                       line_no, path);
    }
    std::vector<double> row(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!ParseDouble(fields[k + 1], row[k])) {
        throw ParseError("non-numeric value '" + std::string(fields[k + 1]) +
                             "'",
                         line_no, path);
      }
    }
    std::string word(fields[0]);
    if (vocab_filter != nullptr && !vocab_filter->contains(word) &&
        !lowered.contains(word)) {
      continue;
    }
    if (!seen.insert(word).second) continue;
    words.push_back(std::move(word));
    values.insert(values.end(), row.begin(), row.end());
  }
  if (words.empty()) {
    throw DataError(path + ": no embedding survives the vocabulary filter");
  }
  const std::size_t n = words.size();
  return StaticEmbeddingTable(std::move(words),
                              Matrix(n, dim, std::move(values)));
}

ContextualStack LoadContextualStack(
    const std::string& path, const std::vector<std::size_t>* expected_lengths) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty file", 1, path);
  ContextualStack stack;
  {
    const auto f = SplitFields(line);
    std::size_t l = 0;
    std::size_t d = 0;
    if (f.size() != 3 || f[0] != "#contextual" ||
        std::from_chars(f[1].data(), f[1].data() + f[1].size(), l).ec !=
            std::errc() ||
        std::from_chars(f[2].data(), f[2].data() + f[2].size(), d).ec !=
            std::errc() ||
        l == 0 || d == 0) {
      throw ParseError("expected header '#contextual <layers> <dim>'", 1, path);
    }
    stack.num_layers = l;
    stack.dim = d;
  }
  const std::size_t width = stack.num_layers * stack.dim;
  std::vector<std::vector<double>> rows;
  auto flush = [&]() {
    if (rows.empty()) return;
    ContextualSentence sent;
    for (std::size_t l = 0; l < stack.num_layers; ++l) {
      Matrix m(rows.size(), stack.dim);
      for (std::size_t t = 0; t < rows.size(); ++t) {
        for (std::size_t k = 0; k < stack.dim; ++k) {
          m(t, k) = rows[t][l * stack.dim + k];
        }
      }
      sent.layers.push_back(std::move(m));
    }
    stack.sentences.push_back(std::move(sent));
    rows.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    const auto f = SplitFields(line);
    if (f.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " values, found " +
                           std::to_string(f.size()),
                       line_no, path);
    }
    std::vector<double> row(width);
    for (std::size_t k = 0; k < width; ++k) {
      if (!ParseDouble(f[k], row[k])) {
        throw ParseError("non-numeric value '" + std::string(f[k]) + "'",
                         line_no, path);
      }
    }
    rows.push_back(std::move(row));
  }
  flush();

  if (expected_lengths != nullptr) {
    const auto& want = *expected_lengths;
    const std::size_t common = std::min(want.size(), stack.sentences.size());
    for (std::size_t s = 0; s < common; ++s) {
      if (stack.sentences[s].tokens() != want[s]) {
        throw AlignmentError(
            "contextual file has " +
                std::to_string(stack.sentences[s].tokens()) +
                " tokens, corpus has " + std::to_string(want[s]),
            s);
      }
    }
    if (want.size() != stack.sentences.size()) {
      throw AlignmentError("contextual file has " +
                               std::to_string(stack.sentences.size()) +
                               " sentences, corpus has " +
                               std::to_string(want.size()),
                           common);
    }
  }
  return stack;
}

void WriteContextualStack(const std::string& path,
                          const ContextualStack& stack) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "#contextual " << stack.num_layers << ' ' << stack.dim << '\n';
  char buf[32];
  for (std::size_t s = 0; s < stack.sentences.size(); ++s) {
    const ContextualSentence& sent = stack.sentences[s];
    if (sent.num_layers() != stack.num_layers || sent.dim() != stack.dim) {
      throw ShapeError("sentence " + std::to_string(s) +
                       " does not match the stack's layer shape");
    }
    if (s > 0) out << '\n';
    for (std::size_t t = 0; t < sent.tokens(); ++t) {
      bool first = true;
      for (const Matrix& layer : sent.layers) {
        for (double v : layer.row(t)) {
          std::snprintf(buf, sizeof(buf), "%.17g", v);
          if (!first) out << ' ';
          out << buf;
          first = false;
        }
      }
      out << '\n';
    }
  }
}

ScalarMix::ScalarMix(std::size_t num_layers)
    : logits(1, num_layers, /*regularized=*/false),
      gamma(1, 1, /*regularized=*/false) {
  if (num_layers == 0) throw ConfigError("scalar mix needs at least one layer");
  gamma.value[0] = 1.0;
}

std::vector<double> ScalarMix::Weights() const {
  std::vector<double> w(num_layers());
  Softmax(logits.value.values(), w);
  return w;
}

Matrix ScalarMix::Forward(const ContextualSentence& sentence) const {
  if (sentence.num_layers() != num_layers()) {
    throw ShapeError("scalar mix expects " + std::to_string(num_layers()) +
                     " layers, sentence has " +
                     std::to_string(sentence.num_layers()));
  }
  const std::vector<double> w = Weights();
  Matrix out(sentence.tokens(), sentence.dim());
  for (std::size_t j = 0; j < w.size(); ++j) {
    RequireSameShape(out, sentence.layers[j], "scalar mix layer");
    const double scale = gamma.value[0] * w[j];
    auto src = sentence.layers[j].values();
    auto dst = out.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
  }
  return out;
}

void ScalarMix::Backward(const ContextualSentence& sentence,
                         const Matrix& d_out) {
  if (sentence.num_layers() != num_layers()) {
    throw ShapeError("scalar mix backward: layer count mismatch");
  }
  const std::vector<double> w = Weights();
  const double g = gamma.value[0];
  std::vector<double> d_weight(w.size(), 0.0);
  double d_gamma = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    RequireSameShape(d_out, sentence.layers[j], "scalar mix backward");
    double dot = 0.0;
    auto src = sentence.layers[j].values();
    auto d = d_out.values();
    for (std::size_t i = 0; i < d.size(); ++i) dot += d[i] * src[i];
    d_weight[j] = g * dot;
    d_gamma += w[j] * dot;
  }
  double weighted = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) weighted += w[j] * d_weight[j];
  for (std::size_t k = 0; k < w.size(); ++k) {
    logits.grad[k] += w[k] * (d_weight[k] - weighted);
  }
  gamma.grad[0] += d_gamma;
}

}  // namespace mtsa
