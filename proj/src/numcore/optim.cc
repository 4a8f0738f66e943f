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

#include "mtsa/numcore/optim.h"

#include <algorithm>
#include <cmath>

#include "mtsa/errors.h"

namespace mtsa {

void ZeroGrads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->ZeroGrad();
}

const AdamState::Slot* AdamState::Find(const Parameter* p) const {
  auto it = slots_.find(p);
  return it == slots_.end() ? nullptr : &it->second;
}

AdamState::Slot& AdamState::SlotFor(const Parameter& p) {
  auto [it, inserted] = slots_.try_emplace(&p);
  Slot& slot = it->second;
  if (inserted) {
    slot.first_moment = Matrix(p.value.rows(), p.value.cols());
    slot.second_moment = Matrix(p.value.rows(), p.value.cols());
  } else {
    RequireSameShape(slot.first_moment, p.value, "adam moments");
  }
  return slot;
}

void AdamStep(std::span<Parameter* const> params, AdamState& state) {
  const AdamOptions& o = state.options();
  for (Parameter* p : params) RequireSameShape(p->value, p->grad, "adam grad");
  for (Parameter* p : params) {
    AdamState::Slot& slot = state.SlotFor(*p);
    ++slot.step;
    const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(slot.step));
    const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(slot.step));
    auto w = p->value.values();
    auto g = p->grad.values();
    auto m = slot.first_moment.values();
    auto v = slot.second_moment.values();
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g[i];
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      w[i] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
    }
  }
}

double GlobalGradNorm(std::span<Parameter* const> params) {
  double s = 0.0;
  for (const Parameter* p : params) s += SumSquares(p->grad);
  return std::sqrt(s);
}

double ClipGlobalNorm(std::span<Parameter* const> params, double max_norm) {
  if (!(max_norm > 0.0)) {
    throw ConfigError("gradient norm cap must be positive");
  }
  const double norm = GlobalGradNorm(params);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (Parameter* p : params) p->grad *= scale;
  }
  return norm;
}

double L2PenaltyGrad(std::span<Parameter* const> params, double lambda) {
  if (lambda < 0.0) throw ConfigError("L2 lambda must be non-negative");
  if (lambda == 0.0) return 0.0;
  double penalty = 0.0;
  for (Parameter* p : params) {
    if (!p->regularized) continue;
    auto w = p->value.values();
    auto g = p->grad.values();
    for (std::size_t i = 0; i < w.size(); ++i) {
      penalty += w[i] * w[i];
      g[i] += 2.0 * lambda * w[i];
    }
  }
  return lambda * penalty;
}

Matrix DropoutMask(std::size_t rows, std::size_t cols, double rate,
                   SeededRng& rng, bool train) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1)");
  }
  Matrix mask(rows, cols, 1.0);
  if (!train || rate == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask.values()) m = rng.Uniform() < rate ? 0.0 : keep_scale;
  return mask;
}

GradCheckResult FiniteDiffCheck(const std::function<double()>& loss,
                                std::span<Parameter* const> params,
                                double epsilon, double floor) {
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (const Parameter* p : params) analytic.push_back(p->grad);

  GradCheckResult result;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter* p = params[pi];
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double saved = p->value[i];
      p->value[i] = saved + epsilon;
      const double up = loss();
      p->value[i] = saved - epsilon;
      const double down = loss();
      p->value[i] = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double a = analytic[pi][i];
      const double abs_err = std::abs(a - numeric);
      const double rel =
          abs_err / std::max({std::abs(a), std::abs(numeric), floor});
      ++result.coordinates;
      result.max_absolute_error = std::max(result.max_absolute_error, abs_err);
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst = std::to_string(pi) + "[" + std::to_string(i) + "]";
      }
    }
  }
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    params[pi]->grad = analytic[pi];
  }
  return result;
}

}  // namespace mtsa
