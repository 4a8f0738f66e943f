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

#ifndef MTSA_NUMCORE_OPTIM_H_
#define MTSA_NUMCORE_OPTIM_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mtsa/numcore/matrix.h"
#include "mtsa/numcore/rng.h"

namespace mtsa {

// A trainable tensor and its gradient accumulator. Bias-like tensors set
// `regularized` to false and are skipped by the L2 penalty.
struct Parameter {
  Parameter() = default;
  Parameter(std::size_t rows, std::size_t cols, bool regularized = true)
      : value(rows, cols), grad(rows, cols), regularized(regularized) {}

  Matrix value;
  Matrix grad;
  bool regularized = true;

  void ZeroGrad() { grad.Fill(0.0); }
  std::size_t size() const { return value.size(); }
};

// Non-owning list of parameters an operation acts on. Order matters only
// for diagnostics.
using ParamList = std::vector<Parameter*>;

void ZeroGrads(std::span<Parameter* const> params);

struct AdamOptions {
  double learning_rate = 1.5e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment buffers are kept per parameter and created on first update, each
// with its own step counter. A parameter that sits out a step (e.g. the
// main-task LSTM during an auxiliary phase) is left completely untouched.
class AdamState {
 public:
  struct Slot {
    Matrix first_moment;
    Matrix second_moment;
    std::int64_t step = 0;
  };

  explicit AdamState(AdamOptions options = {}) : options_(options) {}

  const AdamOptions& options() const { return options_; }
  AdamOptions& options() { return options_; }

  // nullptr if `p` has never been updated.
  const Slot* Find(const Parameter* p) const;
  Slot& SlotFor(const Parameter& p);

 private:
  AdamOptions options_;
  std::unordered_map<const Parameter*, Slot> slots_;
};

// Bias-corrected Adam update of each parameter from its grad buffer.
void AdamStep(std::span<Parameter* const> params, AdamState& state);

// Global L2 norm over all gradients.
double GlobalGradNorm(std::span<Parameter* const> params);

// Rescales all gradients by max_norm / N when the global norm N exceeds
// max_norm. Returns the pre-clip norm. Throws ConfigError if max_norm <= 0.
double ClipGlobalNorm(std::span<Parameter* const> params, double max_norm);

// Adds 2 * lambda * w to the gradient of every regularized parameter and
// returns the penalty lambda * sum(w^2).
double L2PenaltyGrad(std::span<Parameter* const> params, double lambda);

// Inverted-dropout mask: entries are 0 with probability `rate`, otherwise
// 1 / (1 - rate). In eval mode (train == false) the mask is all ones and
// the generator is not advanced.
Matrix DropoutMask(std::size_t rows, std::size_t cols, double rate,
                   SeededRng& rng, bool train = true);

struct GradCheckResult {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::size_t coordinates = 0;
  std::string worst;  // "<param index>[<flat index>]"
};

// Compares the analytic gradients already stored in params[i]->grad with
// central differences (f(w + eps) - f(w - eps)) / 2eps of `loss`. The
// relative error of a coordinate is |a - n| / max(|a|, |n|, floor), so
// gradients far below `floor` are compared absolutely. Parameter values are
// restored exactly afterwards. `loss` must be deterministic and must not
// touch the grad buffers' meaning (it may overwrite them; they are saved).
GradCheckResult FiniteDiffCheck(const std::function<double()>& loss,
                                std::span<Parameter* const> params,
                                double epsilon = 1e-4, double floor = 1e-6);

}  // namespace mtsa

#endif  // MTSA_NUMCORE_OPTIM_H_
