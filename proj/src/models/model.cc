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

#include "mtsa/model.h"

#include "mtsa/errors.h"

namespace mtsa {
namespace {

void Record(OpTrace* trace, const char* op) {
  if (trace != nullptr) trace->ops.emplace_back(op);
}

void AppendParams(ParamList& out, const ParamList& more) {
  out.insert(out.end(), more.begin(), more.end());
}

template <typename P, typename Self>
std::vector<std::pair<std::string, P*>> CollectNamed(Self& m) {
  std::vector<std::pair<std::string, P*>> out;
  if (m.config().source == EmbeddingSource::kContextualMix) {
    out.emplace_back("scalar_mix.logits", &m.scalar_mix().logits);
    out.emplace_back("scalar_mix.gamma", &m.scalar_mix().gamma);
  }
  auto cell = [&](const std::string& prefix, auto& c) {
    out.emplace_back(prefix + ".w_ih", &c.w_ih);
    out.emplace_back(prefix + ".w_hh", &c.w_hh);
    out.emplace_back(prefix + ".bias", &c.bias);
  };
  cell("encoder.layer1.forward", m.encoder().layer1.forward);
  cell("encoder.layer1.backward", m.encoder().layer1.backward);
  cell("encoder.layer2.forward", m.encoder().layer2.forward);
  cell("encoder.layer2.backward", m.encoder().layer2.backward);
  auto head = [&](const std::string& prefix, auto& h) {
    out.emplace_back(prefix + ".projection", &h.projection);
    out.emplace_back(prefix + ".bias", &h.bias);
    out.emplace_back(prefix + ".transitions", &h.transitions);
    out.emplace_back(prefix + ".start", &h.start);
    out.emplace_back(prefix + ".end", &h.end);
  };
  head("main_head", m.main_head());
  if (m.is_mtl()) head("aux_head", m.aux_head());
  return out;
}

}  // namespace

const char* EmbeddingSourceName(EmbeddingSource s) {
  return s == EmbeddingSource::kStatic ? "static" : "contextual";
}

EmbeddingSource ParseEmbeddingSource(std::string_view name) {
  if (name == "static") return EmbeddingSource::kStatic;
  if (name == "contextual") return EmbeddingSource::kContextualMix;
  throw ConfigError("unknown embedding source '" + std::string(name) + "'");
}

void ModelConfig::Validate() const {
  if (embedding_dim == 0) throw ConfigError("embedding_dim must be positive");
  if (hidden1 == 0 || hidden2 == 0) {
    throw ConfigError("LSTM hidden sizes must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ConfigError("dropout must lie in [0, 1)");
  }
  if (source == EmbeddingSource::kContextualMix && contextual_layers == 0) {
    throw ConfigError("contextual models need contextual_layers > 0");
  }
}

Model::Model(ModelConfig config,
             std::shared_ptr<const StaticEmbeddingTable> table)
    : config_(std::move(config)), table_(std::move(table)) {
  if (config_.source != EmbeddingSource::kStatic) {
    throw ConfigError("this constructor builds static-embedding models");
  }
  if (table_ == nullptr) throw ConfigError("static model without a table");
  if (table_->dim() != config_.embedding_dim) {
    throw ConfigError("embedding_dim " + std::to_string(config_.embedding_dim) +
                      " does not match table dimension " +
                      std::to_string(table_->dim()));
  }
  config_.Validate();
  encoder_ = EncoderStack(config_.embedding_dim, config_.hidden1,
                          config_.hidden2);
  main_head_ = CrfHead(2 * config_.hidden2, BuildConstraints(config_.main_scheme));
  if (config_.aux_scheme) {
    aux_head_.emplace(2 * config_.hidden1, BuildConstraints(*config_.aux_scheme));
  }
}

Model::Model(ModelConfig config) : config_(std::move(config)) {
  if (config_.source != EmbeddingSource::kContextualMix) {
    throw ConfigError("static models need an embedding table");
  }
  config_.Validate();
  mix_ = ScalarMix(config_.contextual_layers);
  encoder_ = EncoderStack(config_.embedding_dim, config_.hidden1,
                          config_.hidden2);
  main_head_ = CrfHead(2 * config_.hidden2, BuildConstraints(config_.main_scheme));
  if (config_.aux_scheme) {
    aux_head_.emplace(2 * config_.hidden1, BuildConstraints(*config_.aux_scheme));
  }
}

void Model::set_dropout(double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout must lie in [0, 1)");
  }
  config_.dropout = rate;
}

CrfHead& Model::aux_head() {
  if (!aux_head_) throw UsageError("single-task model has no auxiliary head");
  return *aux_head_;
}

const CrfHead& Model::aux_head() const {
  if (!aux_head_) throw UsageError("single-task model has no auxiliary head");
  return *aux_head_;
}

void Model::Initialize(std::uint64_t seed) {
  SeededRng rng(seed);
  mix_.logits.value.Fill(0.0);
  mix_.gamma.value.Fill(1.0);
  encoder_.Initialize(rng);
  main_head_.Initialize(rng);
  if (aux_head_) aux_head_->Initialize(rng);
}

Matrix Model::Embed(const ModelInput& input) const {
  if (input.tokens.empty()) throw DomainError("cannot embed an empty sentence");
  if (config_.source == EmbeddingSource::kStatic) {
    return table_->Lookup(input.tokens);
  }
  if (input.layers == nullptr) {
    throw UsageError("contextual model called without precomputed layers");
  }
  if (input.layers->tokens() != input.tokens.size()) {
    throw ShapeError("contextual layers cover " +
                     std::to_string(input.layers->tokens()) +
                     " tokens, sentence has " +
                     std::to_string(input.tokens.size()));
  }
  return mix_.Forward(*input.layers);
}

void Model::BackwardEmbed(const ModelInput& input, const Matrix& d_embedded) {
  if (config_.source == EmbeddingSource::kContextualMix) {
    mix_.Backward(*input.layers, d_embedded);
  }
}

namespace {

DropoutSpec SpecFor(double rate, Mode mode, SeededRng* rng) {
  if (mode == Mode::kEval || rate == 0.0) return {rate, nullptr};
  if (rng == nullptr) throw UsageError("train mode needs a dropout generator");
  return {rate, rng};
}

}  // namespace

Matrix Model::ForwardMain(const ModelInput& input, Mode mode, SeededRng* rng,
                          OpTrace* trace) const {
  Record(trace, "embed");
  const Matrix e = Embed(input);
  Record(trace, "bilstm1");
  Record(trace, "skip_concat");
  Record(trace, "bilstm2");
  const auto out = encoder_.Encode(e, SpecFor(config_.dropout, mode, rng));
  Record(trace, "main_emissions");
  return main_head_.Emissions(out.layer2);
}

Matrix Model::ForwardAux(const ModelInput& input, Mode mode,
                         SeededRng* rng) const {
  const CrfHead& head = aux_head();
  const Matrix e = Embed(input);
  const auto out = encoder_.Encode(e, SpecFor(config_.dropout, mode, rng),
                                   nullptr, /*with_layer2=*/false);
  return head.Emissions(out.layer1);
}

double Model::MainLossAndGrad(const ModelInput& input,
                              const std::vector<int>& gold, Mode mode,
                              SeededRng* rng) {
  const Matrix e = Embed(input);
  EncoderStack::Cache cache;
  const auto out =
      encoder_.Encode(e, SpecFor(config_.dropout, mode, rng), &cache);
  const Matrix emissions = main_head_.Emissions(out.layer2);
  NllResult nll = NllAndGrad(emissions, gold, main_head_);
  AccumulateTransitionGrads(nll.grads, main_head_);
  const Matrix d_l2 =
      main_head_.BackwardEmissions(out.layer2, nll.grads.emissions);
  const Matrix d_e = encoder_.Backward(cache, &d_l2, nullptr);
  BackwardEmbed(input, d_e);
  return nll.loss;
}

double Model::AuxLossAndGrad(const ModelInput& input,
                             const std::vector<int>& gold, Mode mode,
                             SeededRng* rng) {
  CrfHead& head = aux_head();
  const Matrix e = Embed(input);
  EncoderStack::Cache cache;
  const auto out = encoder_.Encode(e, SpecFor(config_.dropout, mode, rng),
                                   &cache, /*with_layer2=*/false);
  const Matrix emissions = head.Emissions(out.layer1);
  NllResult nll = NllAndGrad(emissions, gold, head);
  AccumulateTransitionGrads(nll.grads, head);
  const Matrix d_l1 = head.BackwardEmissions(out.layer1, nll.grads.emissions);
  const Matrix d_e = encoder_.Backward(cache, nullptr, &d_l1);
  BackwardEmbed(input, d_e);
  return nll.loss;
}

double Model::MainLoss(const ModelInput& input,
                       const std::vector<int>& gold) const {
  return NllAndGrad(ForwardMain(input), gold, main_head_).loss;
}

double Model::AuxLoss(const ModelInput& input,
                      const std::vector<int>& gold) const {
  return NllAndGrad(ForwardAux(input), gold, aux_head()).loss;
}

std::vector<int> Model::PredictTags(const ModelInput& input,
                                    OpTrace* trace) const {
  const Matrix emissions = ForwardMain(input, Mode::kEval, nullptr, trace);
  Record(trace, "viterbi");
  return Viterbi(emissions, main_head_).tags;
}

std::vector<Span> Model::Predict(const ModelInput& input,
                                 OpTrace* trace) const {
  return TagsToSpans(PredictTags(input, trace), config_.main_scheme).spans;
}

std::size_t AuxHeadParameterCount(std::size_t hidden1, std::size_t aux_tags) {
  return CrfHead::ParameterCount(2 * hidden1, aux_tags);
}

ParameterCount Model::CountParameters() const {
  ParameterCount c;
  if (config_.source == EmbeddingSource::kStatic) {
    c.components["embedding"] = table_->vectors().size();
  } else {
    c.components["scalar_mix"] = mix_.logits.size() + mix_.gamma.size();
  }
  c.components["bilstm1"] = encoder_.layer1.ParameterCount();
  c.components["bilstm2"] = encoder_.layer2.ParameterCount();
  c.components["main_head"] = main_head_.ParameterCount();
  if (aux_head_) c.components["aux_head"] = aux_head_->ParameterCount();
  for (const auto& [name, n] : c.components) {
    c.total += n;
    if (name != "embedding") c.trainable += n;
  }
  c.trainable_main_path =
      c.trainable - (aux_head_ ? aux_head_->ParameterCount() : 0);
  return c;
}

ParamList Model::MainPathParams() {
  ParamList p;
  if (config_.source == EmbeddingSource::kContextualMix) {
    p = {&mix_.logits, &mix_.gamma};
  }
  AppendParams(p, encoder_.layer1.Params());
  AppendParams(p, encoder_.layer2.Params());
  AppendParams(p, main_head_.Params());
  return p;
}

ParamList Model::AuxPathParams() {
  ParamList p;
  if (config_.source == EmbeddingSource::kContextualMix) {
    p = {&mix_.logits, &mix_.gamma};
  }
  AppendParams(p, encoder_.layer1.Params());
  AppendParams(p, aux_head().Params());
  return p;
}

ParamList Model::TrainableParams() {
  ParamList p;
  for (auto& [name, param] : NamedParams()) p.push_back(param);
  return p;
}

std::vector<std::pair<std::string, Parameter*>> Model::NamedParams() {
  return CollectNamed<Parameter>(*this);
}

std::vector<std::pair<std::string, const Parameter*>> Model::NamedParams()
    const {
  return CollectNamed<const Parameter>(*this);
}

Model Model::MainPathClone() const {
  ModelConfig cfg = config_;
  cfg.aux_scheme.reset();
  Model clone = config_.source == EmbeddingSource::kStatic ? Model(cfg, table_)
                                                           : Model(cfg);
  clone.mix_ = mix_;
  clone.encoder_ = encoder_;
  clone.main_head_ = main_head_;
  return clone;
}

}  // namespace mtsa
