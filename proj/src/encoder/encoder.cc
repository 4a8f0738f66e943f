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

#include "mtsa/encoder.h"

#include <cmath>
#include <string>

#include "mtsa/errors.h"
#include "mtsa/numcore/kernels.h"

namespace mtsa {
namespace {

void FillUniform(Matrix& m, double bound, SeededRng& rng) {
  for (double& v : m.values()) v = rng.Uniform(-bound, bound);
}

Matrix MaskFor(std::size_t rows, std::size_t cols, const DropoutSpec& d) {
  if (d.rng == nullptr) return Matrix(rows, cols, 1.0);
  return DropoutMask(rows, cols, d.rate, *d.rng, /*train=*/true);
}

}  // namespace

LstmCell::LstmCell(std::size_t input_dim, std::size_t hidden_dim)
    : w_ih(4 * hidden_dim, input_dim),
      w_hh(4 * hidden_dim, hidden_dim),
      bias(1, 4 * hidden_dim, /*regularized=*/false) {
  if (input_dim == 0 || hidden_dim == 0) {
    throw ConfigError("LSTM dimensions must be positive");
  }
}

void LstmCell::Initialize(SeededRng& rng) {
  FillUniform(w_ih.value, std::sqrt(1.0 / static_cast<double>(input_dim())),
              rng);
  FillUniform(w_hh.value, std::sqrt(1.0 / static_cast<double>(hidden_dim())),
              rng);
  bias.value.Fill(0.0);
  const std::size_t h = hidden_dim();
  for (std::size_t k = h; k < 2 * h; ++k) bias.value[k] = 1.0;
}

std::size_t LstmCell::ParameterCount(std::size_t input_dim,
                                     std::size_t hidden_dim) {
  return 4 * (hidden_dim * (input_dim + hidden_dim) + hidden_dim);
}

std::size_t LstmCell::ParameterCount() const {
  return ParameterCount(input_dim(), hidden_dim());
}

Matrix LstmCell::Forward(const Matrix& inputs, Cache* cache) const {
  if (inputs.rows() == 0) throw DomainError("LSTM over an empty sequence");
  if (inputs.cols() != input_dim()) {
    throw ShapeError("LSTM expects input width " + std::to_string(input_dim()) +
                     ", got " + std::to_string(inputs.cols()));
  }
  const std::size_t n = inputs.rows();
  const std::size_t h = hidden_dim();
  Matrix z_in = MatMulTransB(inputs, w_ih.value);
  Matrix gates(n, 4 * h);
  Matrix cells(n, h);
  Matrix tanh_cells(n, h);
  Matrix hidden(n, h);
  std::vector<double> z(4 * h);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < 4 * h; ++k) {
      double s = z_in(t, k) + bias.value[k];
      if (t > 0) {
        const double* wr = w_hh.value.row(k).data();
        const double* hp = hidden.row(t - 1).data();
        for (std::size_t j = 0; j < h; ++j) s += wr[j] * hp[j];
      }
      z[k] = s;
    }
    for (std::size_t j = 0; j < h; ++j) {
      const double i = Sigmoid(z[j]);
      const double f = Sigmoid(z[h + j]);
      const double g = std::tanh(z[2 * h + j]);
      const double o = Sigmoid(z[3 * h + j]);
      const double c_prev = t > 0 ? cells(t - 1, j) : 0.0;
      const double c = f * c_prev + i * g;
      const double tc = std::tanh(c);
      gates(t, j) = i;
      gates(t, h + j) = f;
      gates(t, 2 * h + j) = g;
      gates(t, 3 * h + j) = o;
      cells(t, j) = c;
      tanh_cells(t, j) = tc;
      hidden(t, j) = o * tc;
    }
  }
  if (cache != nullptr) {
    cache->inputs = inputs;
    cache->gates = std::move(gates);
    cache->cells = std::move(cells);
    cache->tanh_cells = std::move(tanh_cells);
    cache->hidden = hidden;
  }
  return hidden;
}

Matrix LstmCell::Backward(const Cache& cache, const Matrix& d_hidden) {
  RequireSameShape(cache.hidden, d_hidden, "LSTM backward");
  const std::size_t n = d_hidden.rows();
  const std::size_t h = hidden_dim();
  Matrix dz(n, 4 * h);
  std::vector<double> dh_next(h, 0.0);
  std::vector<double> dc_next(h, 0.0);
  for (std::size_t step = n; step-- > 0;) {
    const std::size_t t = step;
    for (std::size_t j = 0; j < h; ++j) {
      const double dh = d_hidden(t, j) + dh_next[j];
      const double i = cache.gates(t, j);
      const double f = cache.gates(t, h + j);
      const double g = cache.gates(t, 2 * h + j);
      const double o = cache.gates(t, 3 * h + j);
      const double tc = cache.tanh_cells(t, j);
      const double c_prev = t > 0 ? cache.cells(t - 1, j) : 0.0;
      const double d_o = dh * tc;
      const double dc = dh * o * (1.0 - tc * tc) + dc_next[j];
      dz(t, j) = dc * g * i * (1.0 - i);
      dz(t, h + j) = dc * c_prev * f * (1.0 - f);
      dz(t, 2 * h + j) = dc * i * (1.0 - g * g);
      dz(t, 3 * h + j) = d_o * o * (1.0 - o);
      dc_next[j] = dc * f;
    }
    for (std::size_t j = 0; j < h; ++j) dh_next[j] = 0.0;
    if (t > 0) {
      for (std::size_t k = 0; k < 4 * h; ++k) {
        const double dzk = dz(t, k);
        if (dzk == 0.0) continue;
        const double* wr = w_hh.value.row(k).data();
        for (std::size_t j = 0; j < h; ++j) dh_next[j] += dzk * wr[j];
      }
    }
  }
  // h_{t-1} per row, zero for t = 0.
  Matrix prev_hidden(n, h);
  for (std::size_t t = 1; t < n; ++t) {
    auto src = cache.hidden.row(t - 1);
    std::copy(src.begin(), src.end(), prev_hidden.row(t).begin());
  }
  MatMulTransAInto(dz, prev_hidden, w_hh.grad);
  MatMulTransAInto(dz, cache.inputs, w_ih.grad);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < 4 * h; ++k) bias.grad[k] += dz(t, k);
  }
  return MatMul(dz, w_ih.value);
}

void BiLstmLayer::Initialize(SeededRng& rng) {
  forward.Initialize(rng);
  backward.Initialize(rng);
}

Matrix BiLstmLayer::Forward(const Matrix& inputs, Cache* cache) const {
  Matrix fwd = forward.Forward(inputs, cache ? &cache->forward : nullptr);
  Matrix bwd = backward.Forward(ReverseRows(inputs),
                                cache ? &cache->backward : nullptr);
  return ConcatCols(fwd, ReverseRows(bwd));
}

Matrix BiLstmLayer::Backward(const Cache& cache, const Matrix& d_out) {
  const std::size_t h = hidden_dim();
  if (d_out.cols() != 2 * h) throw ShapeError("Bi-LSTM backward: width");
  Matrix dx = forward.Backward(cache.forward, SliceCols(d_out, 0, h));
  Matrix dx_rev =
      backward.Backward(cache.backward, ReverseRows(SliceCols(d_out, h, 2 * h)));
  dx += ReverseRows(dx_rev);
  return dx;
}

ParamList BiLstmLayer::Params() {
  ParamList p = forward.Params();
  for (Parameter* q : backward.Params()) p.push_back(q);
  return p;
}

void EncoderStack::Initialize(SeededRng& rng) {
  layer1.Initialize(rng);
  layer2.Initialize(rng);
}

EncoderStack::Output EncoderStack::Encode(const Matrix& embedded,
                                          const DropoutSpec& dropout,
                                          Cache* cache,
                                          bool with_layer2) const {
  if (embedded.cols() != embedding_dim()) {
    throw ShapeError("encoder expects embedding width " +
                     std::to_string(embedding_dim()) + ", got " +
                     std::to_string(embedded.cols()));
  }
  const std::size_t n = embedded.rows();
  Matrix embed_mask = MaskFor(n, embedded.cols(), dropout);
  Matrix e = Hadamard(embedded, embed_mask);
  Output out;
  Matrix l1 = layer1.Forward(e, cache ? &cache->layer1 : nullptr);
  Matrix l1_mask = MaskFor(n, l1.cols(), dropout);
  out.layer1 = Hadamard(l1, l1_mask);
  Matrix l2_mask;
  if (with_layer2) {
    Matrix l2 = layer2.Forward(ConcatCols(e, out.layer1),
                               cache ? &cache->layer2 : nullptr);
    l2_mask = MaskFor(n, l2.cols(), dropout);
    out.layer2 = Hadamard(l2, l2_mask);
  }
  if (cache != nullptr) {
    cache->embed_mask = std::move(embed_mask);
    cache->layer1_mask = std::move(l1_mask);
    cache->layer2_mask = std::move(l2_mask);
    cache->has_layer2 = with_layer2;
  }
  return out;
}

Matrix EncoderStack::Backward(const Cache& cache, const Matrix* d_layer2,
                              const Matrix* d_layer1) {
  const std::size_t n = cache.embed_mask.rows();
  const std::size_t d = embedding_dim();
  Matrix d_e(n, d);
  Matrix d_l1(n, layer1.output_dim());
  if (d_layer2 != nullptr) {
    if (!cache.has_layer2) {
      throw UsageError("encoder backward: layer 2 was not run forward");
    }
    Matrix d_in2 =
        layer2.Backward(cache.layer2, Hadamard(*d_layer2, cache.layer2_mask));
    d_e += SliceCols(d_in2, 0, d);
    d_l1 += SliceCols(d_in2, d, d_in2.cols());
  }
  if (d_layer1 != nullptr) d_l1 += *d_layer1;
  d_e += layer1.Backward(cache.layer1, Hadamard(d_l1, cache.layer1_mask));
  return Hadamard(d_e, cache.embed_mask);
}

}  // namespace mtsa
