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

#ifndef MTSA_ENCODER_H_
#define MTSA_ENCODER_H_

#include <cstddef>

#include "mtsa/numcore/matrix.h"
#include "mtsa/numcore/optim.h"
#include "mtsa/numcore/rng.h"

namespace mtsa {

// Single-direction LSTM. Gate blocks in the 4h dimension are ordered input,
// forget, cell candidate, output. Initial hidden and cell states are zero.
class LstmCell {
 public:
  struct Cache {
    Matrix inputs;  // n x d_in
    Matrix gates;   // n x 4h, post-activation
    Matrix cells;   // n x h
    Matrix tanh_cells;
    Matrix hidden;  // n x h
  };

  LstmCell() = default;
  LstmCell(std::size_t input_dim, std::size_t hidden_dim);

  std::size_t input_dim() const { return w_ih.value.cols(); }
  std::size_t hidden_dim() const { return w_hh.value.cols(); }

  // Uniform in +-sqrt(1 / fan_in) per matrix; forget-gate bias set to 1.
  void Initialize(SeededRng& rng);

  // n x h hidden states. `cache` may be null for inference.
  Matrix Forward(const Matrix& inputs, Cache* cache = nullptr) const;
  // Accumulates parameter gradients and returns d(loss)/d(inputs).
  Matrix Backward(const Cache& cache, const Matrix& d_hidden);

  ParamList Params() { return {&w_ih, &w_hh, &bias}; }
  // 4 * (h * (d_in + h) + h)
  std::size_t ParameterCount() const;
  static std::size_t ParameterCount(std::size_t input_dim,
                                    std::size_t hidden_dim);

  Parameter w_ih;  // 4h x d_in
  Parameter w_hh;  // 4h x h
  Parameter bias;  // 1 x 4h
};

// Forward cell over tokens 0..n-1, backward cell over n-1..0; the per-token
// outputs are concatenated [forward | backward].
class BiLstmLayer {
 public:
  struct Cache {
    LstmCell::Cache forward;
    LstmCell::Cache backward;
  };

  BiLstmLayer() = default;
  BiLstmLayer(std::size_t input_dim, std::size_t hidden_dim)
      : forward(input_dim, hidden_dim), backward(input_dim, hidden_dim) {}

  std::size_t input_dim() const { return forward.input_dim(); }
  std::size_t hidden_dim() const { return forward.hidden_dim(); }
  std::size_t output_dim() const { return 2 * hidden_dim(); }

  void Initialize(SeededRng& rng);
  Matrix Forward(const Matrix& inputs, Cache* cache = nullptr) const;
  Matrix Backward(const Cache& cache, const Matrix& d_out);

  ParamList Params();
  std::size_t ParameterCount() const { return 2 * forward.ParameterCount(); }

  LstmCell forward;
  LstmCell backward;
};

struct DropoutSpec {
  double rate = 0.0;
  SeededRng* rng = nullptr;  // null: evaluation mode, no dropout
};

// Two stacked Bi-LSTMs. The second consumes the embeddings concatenated with
// the first layer's output. Dropout (same rate) is applied per token to the
// embeddings and to each layer's output.
class EncoderStack {
 public:
  struct Cache {
    Matrix embed_mask;
    Matrix layer1_mask;
    Matrix layer2_mask;
    BiLstmLayer::Cache layer1;
    BiLstmLayer::Cache layer2;
    bool has_layer2 = false;
  };

  struct Output {
    Matrix layer1;  // n x 2h1, after dropout
    Matrix layer2;  // n x 2h2, after dropout; empty when not computed
  };

  EncoderStack() = default;
  EncoderStack(std::size_t embedding_dim, std::size_t hidden1,
               std::size_t hidden2)
      : layer1(embedding_dim, hidden1),
        layer2(embedding_dim + 2 * hidden1, hidden2) {}

  std::size_t embedding_dim() const { return layer1.input_dim(); }

  void Initialize(SeededRng& rng);

  // With `with_layer2` false only the first layer runs and layer2 stays
  // untouched (auxiliary-task path).
  Output Encode(const Matrix& embedded, const DropoutSpec& dropout,
                Cache* cache = nullptr, bool with_layer2 = true) const;

  // Back-propagates gradients arriving at either output (null when absent)
  // and returns d(loss)/d(embedded).
  Matrix Backward(const Cache& cache, const Matrix* d_layer2,
                  const Matrix* d_layer1);

  BiLstmLayer layer1;
  BiLstmLayer layer2;
};

}  // namespace mtsa

#endif  // MTSA_ENCODER_H_
