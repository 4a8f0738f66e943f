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

#include "mtsa/training.h"

#include <limits>

#include "json.hpp"
#include "mtsa/errors.h"
#include "mtsa/numcore/optim.h"

namespace mtsa {
namespace {

using Json = nlohmann::ordered_json;

// Stream ids forked from the training seed.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kMainShuffleStream = 1;
constexpr std::uint64_t kAuxShuffleStream = 2;
constexpr std::uint64_t kDropoutStream = 3;

void RequireData(const std::vector<Example>& data, const char* what) {
  if (data.empty()) {
    throw ConfigError(std::string(what) + " set is empty");
  }
}

double RunPhase(Model& model, const std::vector<Example>& data, Phase phase,
                const TrainConfig& config, AdamState& adam,
                SeededRng& shuffle_rng, SeededRng& dropout_rng) {
  double total = 0.0;
  for (const auto& batch :
       BatchIndices(data.size(), config.batch_size, shuffle_rng)) {
    total += TrainStep(model, data, batch, phase, config, adam, dropout_rng);
  }
  return total / static_cast<double>(data.size());
}

struct Tracker {
  Tracker(const TrainConfig& config, const Model& model)
      : stopping(config.patience), best(model) {}

  EarlyStopping stopping;
  Model best;
  std::vector<EpochLog> logs;
};

// Shared by both schedules: evaluates dev after a main pass and updates the
// best copy. Returns true when training should stop.
bool FinishMainEpoch(Tracker& t, const Model& model,
                     const std::vector<Example>& dev, const TrainConfig& config,
                     std::size_t epoch, double mean_loss,
                     const EpochCallback& on_epoch) {
  EpochLog log;
  log.index = t.logs.size() + 1;
  log.epoch = epoch;
  log.phase = Phase::kMain;
  log.mean_loss = mean_loss;
  log.dev = EvaluateModel(model, dev);
  log.best =
      t.stopping.Update(epoch, MetricValue(*log.dev, config.monitored_metric));
  if (log.best) t.best = model;
  t.logs.push_back(log);
  if (on_epoch) on_epoch(log);
  return t.stopping.ShouldStop();
}

TrainResult Finish(Tracker& t, std::size_t epochs_run) {
  return TrainResult{std::move(t.best), std::move(t.logs),
                     t.stopping.best_epoch(), t.stopping.best_score(),
                     epochs_run};
}

}  // namespace

std::vector<Example> MakeExamples(const std::vector<Sentence>& sentences,
                                  const LabelScheme& scheme,
                                  const ContextualStack* stack) {
  if (stack != nullptr && stack->sentences.size() != sentences.size()) {
    throw AlignmentError("contextual stack has " +
                             std::to_string(stack->sentences.size()) +
                             " sentences, corpus has " +
                             std::to_string(sentences.size()),
                         stack->sentences.size());
  }
  std::vector<Example> out;
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    Example ex;
    ex.tokens = sentences[i].tokens;
    ex.tags = TagIndices(sentences[i].tags, scheme);
    ex.spans = TagsToSpans(ex.tags, scheme).spans;
    if (stack != nullptr) {
      ex.layers = &stack->sentences[i];
      if (ex.layers->tokens() != ex.tokens.size()) {
        throw AlignmentError("token count differs from contextual layers", i);
      }
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<std::vector<std::size_t>> BatchIndices(std::size_t n,
                                                   std::size_t batch_size,
                                                   SeededRng& rng) {
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.Shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t b = 0; b < n; b += batch_size) {
    const std::size_t e = std::min(n, b + batch_size);
    batches.emplace_back(order.begin() + b, order.begin() + e);
  }
  return batches;
}

bool EarlyStopping::Update(std::size_t epoch, double score) {
  if (!any_ || score > best_score_) {
    any_ = true;
    best_score_ = score;
    best_epoch_ = epoch;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

const char* PhaseName(Phase phase) {
  return phase == Phase::kAux ? "aux" : "main";
}

std::string EpochLogJson(const EpochLog& log) {
  Json j;
  j["index"] = log.index;
  j["epoch"] = log.epoch;
  j["phase"] = PhaseName(log.phase);
  j["mean_loss"] = log.mean_loss;
  if (log.dev) {
    const TargetedMetrics& m = *log.dev;
    j["dev"] = {{"f1_a", m.f1_a}, {"acc_s", m.acc_s}, {"f1_s", m.f1_s},
                {"f1_i", m.f1_i}};
  } else {
    j["dev"] = nullptr;
  }
  j["best"] = log.best;
  return j.dump();
}

std::string EpochLogsJsonl(const std::vector<EpochLog>& logs) {
  std::string out;
  for (const auto& log : logs) out += EpochLogJson(log) + "\n";
  return out;
}

double TrainStep(Model& model, const std::vector<Example>& data,
                 const std::vector<std::size_t>& batch, Phase phase,
                 const TrainConfig& config, AdamState& adam, SeededRng& rng) {
  const ParamList params =
      phase == Phase::kMain ? model.MainPathParams() : model.AuxPathParams();
  ZeroGrads(params);
  double loss = 0.0;
  for (std::size_t i : batch) {
    const Example& ex = data.at(i);
    loss += phase == Phase::kMain
                ? model.MainLossAndGrad(ex.input(), ex.tags, Mode::kTrain, &rng)
                : model.AuxLossAndGrad(ex.input(), ex.tags, Mode::kTrain, &rng);
  }
  if (config.l2_lambda > 0.0) L2PenaltyGrad(params, config.l2_lambda);
  ClipGlobalNorm(params, config.grad_norm_cap);
  adam.options().learning_rate = config.learning_rate;
  AdamStep(params, adam);
  return loss;
}

void InitializeModel(Model& model, std::uint64_t seed) {
  model.Initialize(SeededRng(seed).Fork(kInitStream).NextU64());
}

std::vector<std::vector<Span>> PredictAll(const Model& model,
                                          const std::vector<Example>& data) {
  std::vector<std::vector<Span>> out(data.size());
  const long long n = static_cast<long long>(data.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        model.Predict(data[static_cast<std::size_t>(i)].input());
  }
  return out;
}

TargetedMetrics EvaluateModel(const Model& model,
                              const std::vector<Example>& data) {
  std::vector<std::vector<Span>> gold;
  gold.reserve(data.size());
  for (const auto& ex : data) gold.push_back(ex.spans);
  return ComputeMetrics(gold, PredictAll(model, data));
}

double MetricValue(const TargetedMetrics& m, const std::string& name) {
  if (name == "f1_a") return m.f1_a;
  if (name == "acc_s") return m.acc_s;
  if (name == "f1_s") return m.f1_s;
  if (name == "f1_i") return m.f1_i;
  throw ConfigError("unknown metric '" + name + "'");
}

TrainResult TrainStl(Model& model, const std::vector<Example>& train,
                     const std::vector<Example>& dev,
                     const TrainConfig& config, const EpochCallback& on_epoch) {
  config.Validate();
  RequireData(train, "training");
  RequireData(dev, "dev");
  model.set_dropout(config.dropout);
  const SeededRng root(config.seed);
  SeededRng shuffle = root.Fork(kMainShuffleStream);
  SeededRng dropout = root.Fork(kDropoutStream);
  AdamState adam(AdamOptions{.learning_rate = config.learning_rate});
  Tracker t(config, model);
  std::size_t epoch = 0;
  while (epoch < config.max_epochs) {
    ++epoch;
    const double loss =
        RunPhase(model, train, Phase::kMain, config, adam, shuffle, dropout);
    if (FinishMainEpoch(t, model, dev, config, epoch, loss, on_epoch)) break;
  }
  return Finish(t, epoch);
}

TrainResult TrainMtl(Model& model, const std::vector<Example>& train,
                     const std::vector<Example>& aux_train,
                     const std::vector<Example>& dev,
                     const TrainConfig& config, const EpochCallback& on_epoch) {
  config.Validate();
  if (!model.is_mtl()) throw UsageError("TrainMtl needs a multi-task model");
  RequireData(train, "training");
  RequireData(aux_train, "auxiliary training");
  RequireData(dev, "dev");
  model.set_dropout(config.dropout);
  const SeededRng root(config.seed);
  SeededRng shuffle = root.Fork(kMainShuffleStream);
  SeededRng aux_shuffle = root.Fork(kAuxShuffleStream);
  SeededRng dropout = root.Fork(kDropoutStream);
  AdamState adam(AdamOptions{.learning_rate = config.learning_rate});
  Tracker t(config, model);
  std::size_t epoch = 0;
  while (epoch < config.max_epochs) {
    ++epoch;
    EpochLog aux;
    aux.index = t.logs.size() + 1;
    aux.epoch = epoch;
    aux.phase = Phase::kAux;
    aux.mean_loss = RunPhase(model, aux_train, Phase::kAux, config, adam,
                             aux_shuffle, dropout);
    t.logs.push_back(aux);
    if (on_epoch) on_epoch(aux);
    const double loss =
        RunPhase(model, train, Phase::kMain, config, adam, shuffle, dropout);
    if (FinishMainEpoch(t, model, dev, config, epoch, loss, on_epoch)) break;
  }
  return Finish(t, epoch);
}

}  // namespace mtsa
