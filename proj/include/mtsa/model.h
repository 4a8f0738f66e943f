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

#ifndef MTSA_MODEL_H_
#define MTSA_MODEL_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtsa/crf.h"
#include "mtsa/embeddings.h"
#include "mtsa/encoder.h"
#include "mtsa/tagging.h"

namespace mtsa {

enum class EmbeddingSource { kStatic, kContextualMix };

const char* EmbeddingSourceName(EmbeddingSource s);
EmbeddingSource ParseEmbeddingSource(std::string_view name);

struct ModelConfig {
  EmbeddingSource source = EmbeddingSource::kStatic;
  std::size_t embedding_dim = 300;
  std::size_t contextual_layers = 0;  // scalar-mix width, contextual only
  std::size_t hidden1 = 60;
  std::size_t hidden2 = 50;
  double dropout = 0.5;
  LabelScheme main_scheme = LabelScheme::Bioul({"POS", "NEU", "NEG"});
  std::optional<LabelScheme> aux_scheme;

  bool is_mtl() const { return aux_scheme.has_value(); }
  // Throws ConfigError on non-positive sizes or a bad dropout rate.
  void Validate() const;
};

// Tokens plus, for contextual models, the sentence's precomputed layers.
struct ModelInput {
  std::span<const std::string> tokens;
  const ContextualSentence* layers = nullptr;
};

enum class Mode { kTrain, kEval };

// Records the named stages a forward pass executes; used to show that MTL
// inference runs exactly the STL operation sequence.
struct OpTrace {
  std::vector<std::string> ops;
};

struct ParameterCount {
  std::size_t total = 0;
  std::size_t trainable = 0;
  // Trainable parameters excluding the auxiliary head (what inference uses).
  std::size_t trainable_main_path = 0;
  std::map<std::string, std::size_t> components;
};

// Embedder -> Bi-LSTM 1 -> [embeddings | Bi-LSTM 1] -> Bi-LSTM 2 -> main CRF.
// In MTL mode an auxiliary CRF reads the Bi-LSTM 1 output.
class Model {
 public:
  // Static-embedding model; `table` is shared and frozen.
  Model(ModelConfig config, std::shared_ptr<const StaticEmbeddingTable> table);
  // Contextual scalar-mix model.
  explicit Model(ModelConfig config);

  const ModelConfig& config() const { return config_; }
  void set_dropout(double rate);
  bool is_mtl() const { return config_.is_mtl(); }

  // Seeds every trainable tensor from `seed`.
  void Initialize(std::uint64_t seed);

  // Main-task emission scores (n x main tags). `rng` drives dropout and is
  // only used in train mode.
  Matrix ForwardMain(const ModelInput& input, Mode mode = Mode::kEval,
                     SeededRng* rng = nullptr, OpTrace* trace = nullptr) const;
  // Auxiliary emissions from the Bi-LSTM 1 features. UsageError on STL.
  Matrix ForwardAux(const ModelInput& input, Mode mode = Mode::kEval,
                    SeededRng* rng = nullptr) const;

  // CRF negative log-likelihood; gradients are added to the grad buffers of
  // the parameters on the respective path.
  double MainLossAndGrad(const ModelInput& input, const std::vector<int>& gold,
                         Mode mode, SeededRng* rng);
  double AuxLossAndGrad(const ModelInput& input, const std::vector<int>& gold,
                        Mode mode, SeededRng* rng);
  // Loss only (no gradient), eval-mode forward.
  double MainLoss(const ModelInput& input, const std::vector<int>& gold) const;
  double AuxLoss(const ModelInput& input, const std::vector<int>& gold) const;

  // Viterbi over the main emissions under the scheme's constraints.
  std::vector<int> PredictTags(const ModelInput& input,
                               OpTrace* trace = nullptr) const;
  std::vector<Span> Predict(const ModelInput& input,
                            OpTrace* trace = nullptr) const;

  ParameterCount CountParameters() const;

  // Parameters touched by the main loss / the auxiliary loss.
  ParamList MainPathParams();
  ParamList AuxPathParams();
  ParamList TrainableParams();
  // Stable names, used by checkpoints.
  std::vector<std::pair<std::string, Parameter*>> NamedParams();
  std::vector<std::pair<std::string, const Parameter*>> NamedParams() const;

  // STL model sharing this model's embedder, encoder and main head weights.
  Model MainPathClone() const;

  const std::shared_ptr<const StaticEmbeddingTable>& table() const {
    return table_;
  }
  ScalarMix& scalar_mix() { return mix_; }
  const ScalarMix& scalar_mix() const { return mix_; }
  EncoderStack& encoder() { return encoder_; }
  const EncoderStack& encoder() const { return encoder_; }
  CrfHead& main_head() { return main_head_; }
  const CrfHead& main_head() const { return main_head_; }
  CrfHead& aux_head();
  const CrfHead& aux_head() const;

 private:
  Matrix Embed(const ModelInput& input) const;
  void BackwardEmbed(const ModelInput& input, const Matrix& d_embedded);

  ModelConfig config_;
  std::shared_ptr<const StaticEmbeddingTable> table_;
  ScalarMix mix_;
  EncoderStack encoder_;
  CrfHead main_head_;
  std::optional<CrfHead> aux_head_;
};

// Expected component sizes for a configuration without building a model.
std::size_t AuxHeadParameterCount(std::size_t hidden1, std::size_t aux_tags);

}  // namespace mtsa

#endif  // MTSA_MODEL_H_
