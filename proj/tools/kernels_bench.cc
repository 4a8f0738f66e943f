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

// Parallel kernels against the serial reference, plus sentence tagging.

#include <memory>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "mtsa/embeddings.h"
#include "mtsa/model.h"
#include "mtsa/numcore/kernels.h"
#include "mtsa/numcore/rng.h"

namespace mtsa {
namespace {

Matrix RandomMatrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  SeededRng rng(seed);
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.Normal();
  return m;
}

template <Matrix (*Fn)(const Matrix&, const Matrix&)>
void BM_MatMul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = RandomMatrix(n, n, 1);
  const Matrix b = RandomMatrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, b));
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_MatMul<MatMul>)->Name("MatMul/parallel")->Arg(64)->Arg(256);
BENCHMARK(BM_MatMul<serial::MatMul>)->Name("MatMul/serial")->Arg(64)->Arg(256);

template <Matrix (*Fn)(const Matrix&, const Matrix&)>
void BM_MatMulTransB(benchmark::State& state) {
  // Shaped like the LSTM input projection: tokens x d times (4h x d)^T.
  const Matrix x = RandomMatrix(40, 300, 3);
  const Matrix w = RandomMatrix(240, 300, 4);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(x, w));
}
BENCHMARK(BM_MatMulTransB<MatMulTransB>)->Name("InputProjection/parallel");
BENCHMARK(BM_MatMulTransB<serial::MatMulTransB>)
    ->Name("InputProjection/serial");

void BM_PredictSentence(benchmark::State& state) {
  std::vector<std::string> words;
  for (int i = 0; i < 500; ++i) words.push_back("w" + std::to_string(i));
  auto table = std::make_shared<const StaticEmbeddingTable>(
      words, RandomMatrix(words.size(), 300, 5));
  Model model(ModelConfig{}, table);
  model.Initialize(6);
  std::vector<std::string> tokens;
  for (int i = 0; i < state.range(0); ++i) tokens.push_back(words[i * 7 % 500]);
  for (auto _ : state) benchmark::DoNotOptimize(model.Predict({tokens}));
}
BENCHMARK(BM_PredictSentence)->Arg(10)->Arg(40);

}  // namespace
}  // namespace mtsa

BENCHMARK_MAIN();
