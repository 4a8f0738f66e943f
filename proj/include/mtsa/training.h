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


#ifndef MTSA_TRAINING_H_
#define MTSA_TRAINING_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtsa/embeddings.h"
#include "mtsa/metrics.h"
#include "mtsa/model.h"
#include "mtsa/numcore/rng.h"
#include "mtsa/tagging.h"

namespace mtsa {

struct TrainConfig {
  std::size_t max_epochs = 150;
  std::size_t patience = 10;
  std::size_t batch_size = 32;
  double learning_rate = 1.5e-3;
  double dropout = 0.5;
  double grad_norm_cap = 5.0;
  double l2_lambda = 1e-4;
  std::uint64_t seed = 0;
  std::string monitored_metric = "f1_i";

  // ConfigError unless sizes and rates are positive (dropout and l2 may be
  // zero), patience < max_epochs and the metric is a reported one.
  void Validate() const;
};

// Flat key=value text; '#' starts a comment, blank lines are ignored.
// Unknown keys, repeated keys and bad values raise ConfigError.
TrainConfig ParseTrainConfig(std::istream& in);
TrainConfig ReadTrainConfig(const std::string& path);
// Canonical text form, parseable by ParseTrainConfig.
std::string FormatTrainConfig(const TrainConfig& config);

// A sentence ready for the model: tag indices in the model's scheme.
struct Example {
  std::vector<std::string> tokens;
  std::vector<int> tags;
  std::vector<Span> spans;
  const ContextualSentence* layers = nullptr;

  ModelInput input() const { return {tokens, layers}; }
};

// Tags must already be in `scheme` (use the convert command otherwise).
// With `stack`, sentence i is paired with stack->sentences[i].
std::vector<Example> MakeExamples(const std::vector<Sentence>& sentences,
                                  const LabelScheme& scheme,
                                  const ContextualStack* stack = nullptr);

// Shuffled index batches covering 0..n-1 exactly once; the last batch may
// be short. ConfigError when batch_size is zero.
std::vector<std::vector<std::size_t>> BatchIndices(std::size_t n,
                                                   std::size_t batch_size,
                                                   SeededRng& rng);

// Stops after `patience` consecutive epochs without strict improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

  // Returns true when `score` is a new best. `epoch` is 1-based.
  bool Update(std::size_t epoch, double score);
  bool ShouldStop() const { return stale_ >= patience_; }
  std::size_t best_epoch() const { return best_epoch_; }
  double best_score() const { return best_score_; }

 private:
  std::size_t patience_;
  std::size_t stale_ = 0;
  std::size_t best_epoch_ = 0;
  double best_score_ = 0.0;
  bool any_ = false;
};

enum class Phase { kAux, kMain };
const char* PhaseName(Phase phase);

struct EpochLog {
  std::size_t index = 0;  // position in the log, 1-based
  std::size_t epoch = 0;  // outer epoch, 1-based
  Phase phase = Phase::kMain;
  double mean_loss = 0.0;  // summed CRF NLL / sentences, without L2
  std::optional<TargetedMetrics> dev;
  bool best = false;
};

std::string EpochLogJson(const EpochLog& log);
std::string EpochLogsJsonl(const std::vector<EpochLog>& logs);

struct TrainResult {
  Model best;
  std::vector<EpochLog> logs;
  std::size_t best_epoch = 0;
  double best_score = 0.0;
  std::size_t epochs_run = 0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Trains `model` in place and returns a copy of its best-dev state. Shuffle
// and dropout streams derive from config.seed; initialisation is the
// caller's job.
TrainResult TrainStl(Model& model, const std::vector<Example>& train,
                     const std::vector<Example>& dev,
                     const TrainConfig& config,
                     const EpochCallback& on_epoch = {});
// Each outer epoch is one aux pass then one main pass.
TrainResult TrainMtl(Model& model, const std::vector<Example>& train,
                     const std::vector<Example>& aux_train,
                     const std::vector<Example>& dev,
                     const TrainConfig& config,
                     const EpochCallback& on_epoch = {});

// One optimizer step on the summed loss of `batch` for the given phase.
// Returns the summed NLL.
double TrainStep(Model& model, const std::vector<Example>& data,
                 const std::vector<std::size_t>& batch, Phase phase,
                 const TrainConfig& config, AdamState& adam, SeededRng& rng);

// Seeds the weights from the training seed on a stream disjoint from the
// shuffle and dropout streams.
void InitializeModel(Model& model, std::uint64_t seed);

// Predictions in parallel over sentences; order-independent.
std::vector<std::vector<Span>> PredictAll(const Model& model,
                                          const std::vector<Example>& data);
TargetedMetrics EvaluateModel(const Model& model,
                              const std::vector<Example>& data);
// Looks up f1_a / acc_s / f1_s / f1_i.
double MetricValue(const TargetedMetrics& m, const std::string& name);

}  // namespace mtsa

#endif  // MTSA_TRAINING_H_
