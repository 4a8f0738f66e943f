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

#include "mtsa/crf.h"

#include <algorithm>
#include <cmath>

#include "mtsa/errors.h"
#include "mtsa/numcore/kernels.h"

namespace mtsa {

TransitionMask TransitionMask::Permissive(std::size_t num_tags) {
  TransitionMask m;
  m.num_tags = num_tags;
  m.transitions.assign(num_tags * num_tags, 1);
  m.start.assign(num_tags, 1);
  m.end.assign(num_tags, 1);
  return m;
}

std::size_t TransitionMask::CountAllowedTransitions() const {
  return static_cast<std::size_t>(
      std::count(transitions.begin(), transitions.end(), 1));
}

TransitionMask BuildConstraints(const LabelScheme& scheme) {
  const std::size_t k = scheme.size();
  if (scheme.style() == TagStyle::kPlain) return TransitionMask::Permissive(k);
  TransitionMask m;
  m.num_tags = k;
  m.transitions.assign(k * k, 0);
  m.start.assign(k, 0);
  m.end.assign(k, 0);
  const bool bioul = scheme.style() == TagStyle::kBioul;
  // A tag "opens" a span when the next tag must continue it.
  auto opens = [&](const LabelScheme::TagInfo& t) {
    return t.prefix == TagPrefix::kBegin ||
           (t.prefix == TagPrefix::kInside && bioul);
  };
  auto starts_fresh = [&](const LabelScheme::TagInfo& t) {
    return t.prefix == TagPrefix::kOutside || t.prefix == TagPrefix::kBegin ||
           t.prefix == TagPrefix::kUnit;
  };
  auto continues = [&](const LabelScheme::TagInfo& t) {
    return t.prefix == TagPrefix::kInside || t.prefix == TagPrefix::kLast;
  };
  for (std::size_t from = 0; from < k; ++from) {
    const auto& f = scheme.Info(static_cast<int>(from));
    for (std::size_t to = 0; to < k; ++to) {
      const auto& t = scheme.Info(static_cast<int>(to));
      bool ok;
      if (bioul) {
        ok = opens(f) ? (continues(t) && t.category == f.category)
                      : starts_fresh(t);
      } else {
        const bool in_span = f.prefix == TagPrefix::kBegin ||
                             f.prefix == TagPrefix::kInside;
        ok = t.prefix != TagPrefix::kInside ||
             (in_span && t.category == f.category);
      }
      m.transitions[from * k + to] = ok ? 1 : 0;
    }
    if (bioul) {
      m.start[from] = starts_fresh(f) ? 1 : 0;
      m.end[from] = (f.prefix == TagPrefix::kOutside ||
                     f.prefix == TagPrefix::kLast ||
                     f.prefix == TagPrefix::kUnit)
                        ? 1
                        : 0;
    } else {
      m.start[from] = f.prefix != TagPrefix::kInside ? 1 : 0;
      m.end[from] = 1;
    }
  }
  return m;
}

TransitionMask BuildBioulConstraints(
    const std::vector<std::string>& categories) {
  return BuildConstraints(LabelScheme::Bioul(categories));
}

CrfHead::CrfHead(std::size_t feature_dim, TransitionMask mask_in)
    : projection(feature_dim, mask_in.num_tags),
      bias(1, mask_in.num_tags, /*regularized=*/false),
      transitions(mask_in.num_tags, mask_in.num_tags),
      start(1, mask_in.num_tags, /*regularized=*/false),
      end(1, mask_in.num_tags, /*regularized=*/false),
      mask(std::move(mask_in)) {
  if (feature_dim == 0 || mask.num_tags == 0) {
    throw ConfigError("CRF head dimensions must be positive");
  }
}

void CrfHead::Initialize(SeededRng& rng) {
  const double bound = std::sqrt(1.0 / static_cast<double>(feature_dim()));
  for (double& v : projection.value.values()) v = rng.Uniform(-bound, bound);
  bias.value.Fill(0.0);
  transitions.value.Fill(0.0);
  start.value.Fill(0.0);
  end.value.Fill(0.0);
}

std::size_t CrfHead::ParameterCount(std::size_t feature_dim,
                                    std::size_t num_tags) {
  return feature_dim * num_tags + num_tags + num_tags * num_tags +
         2 * num_tags;
}

std::size_t CrfHead::ParameterCount() const {
  return ParameterCount(feature_dim(), num_tags());
}

Matrix CrfHead::Emissions(const Matrix& features) const {
  if (features.cols() != feature_dim()) {
    throw ShapeError("CRF expects feature width " +
                     std::to_string(feature_dim()) + ", got " +
                     std::to_string(features.cols()));
  }
  Matrix e = MatMul(features, projection.value);
  for (std::size_t t = 0; t < e.rows(); ++t) {
    for (std::size_t j = 0; j < e.cols(); ++j) e(t, j) += bias.value[j];
  }
  return e;
}

Matrix CrfHead::BackwardEmissions(const Matrix& features,
                                  const Matrix& d_emissions) {
  if (d_emissions.rows() != features.rows() ||
      d_emissions.cols() != num_tags()) {
    throw ShapeError("CRF backward: emission gradient shape");
  }
  MatMulTransAInto(features, d_emissions, projection.grad);
  for (std::size_t t = 0; t < d_emissions.rows(); ++t) {
    for (std::size_t j = 0; j < num_tags(); ++j) {
      bias.grad[j] += d_emissions(t, j);
    }
  }
  return MatMulTransB(d_emissions, projection.value);
}

Matrix CrfHead::EffectiveTransitions() const {
  Matrix t = transitions.value;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!mask.transitions[i]) t[i] += kDisallowedScore;
  }
  return t;
}

std::vector<double> CrfHead::EffectiveStart() const {
  std::vector<double> s(start.value.values().begin(),
                        start.value.values().end());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!mask.start[j]) s[j] += kDisallowedScore;
  }
  return s;
}

std::vector<double> CrfHead::EffectiveEnd() const {
  std::vector<double> s(end.value.values().begin(), end.value.values().end());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!mask.end[j]) s[j] += kDisallowedScore;
  }
  return s;
}

namespace {

void CheckEmissions(const Matrix& emissions, const CrfHead& crf) {
  if (emissions.rows() == 0) throw DomainError("CRF over an empty sequence");
  if (emissions.cols() != crf.num_tags()) {
    throw ShapeError("CRF expects " + std::to_string(crf.num_tags()) +
                     " emission columns, got " +
                     std::to_string(emissions.cols()));
  }
}

// alpha[t][j]: log-sum of scores of all prefixes ending in tag j at t.
Matrix ForwardScores(const Matrix& e, const Matrix& trans,
                     const std::vector<double>& start) {
  const std::size_t n = e.rows();
  const std::size_t k = e.cols();
  Matrix alpha(n, k);
  for (std::size_t j = 0; j < k; ++j) alpha(0, j) = start[j] + e(0, j);
  std::vector<double> buf(k);
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < k; ++i) buf[i] = alpha(t - 1, i) + trans(i, j);
      alpha(t, j) = LogSumExp(buf) + e(t, j);
    }
  }
  return alpha;
}

}  // namespace

void RequireFeasible(const TransitionMask& mask, std::size_t n) {
  const std::size_t k = mask.num_tags;
  std::vector<char> reach(mask.start.begin(), mask.start.end());
  for (std::size_t t = 1; t < n; ++t) {
    std::vector<char> next(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      if (!reach[i]) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (mask.Allowed(i, j)) next[j] = 1;
      }
    }
    reach.swap(next);
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (reach[j] && mask.end[j]) return;
  }
  throw InfeasibleLatticeError("no tag path of length " + std::to_string(n) +
                               " is allowed by the transition mask");
}

double PathScore(const Matrix& emissions, const std::vector<int>& tags,
                 const CrfHead& crf) {
  CheckEmissions(emissions, crf);
  if (tags.size() != emissions.rows()) {
    throw ShapeError("path length does not match emissions");
  }
  const Matrix trans = crf.EffectiveTransitions();
  const auto start = crf.EffectiveStart();
  const auto end = crf.EffectiveEnd();
  double s = start[tags[0]] + emissions(0, tags[0]);
  for (std::size_t t = 1; t < tags.size(); ++t) {
    s += trans(tags[t - 1], tags[t]) + emissions(t, tags[t]);
  }
  return s + end[tags.back()];
}

double LogPartition(const Matrix& emissions, const CrfHead& crf) {
  CheckEmissions(emissions, crf);
  RequireFeasible(crf.mask, emissions.rows());
  const Matrix trans = crf.EffectiveTransitions();
  const auto end = crf.EffectiveEnd();
  const Matrix alpha = ForwardScores(emissions, trans, crf.EffectiveStart());
  const std::size_t n = emissions.rows();
  std::vector<double> last(crf.num_tags());
  for (std::size_t j = 0; j < last.size(); ++j) last[j] = alpha(n - 1, j) + end[j];
  return LogSumExp(last);
}

NllResult NllAndGrad(const Matrix& emissions, const std::vector<int>& gold,
                     const CrfHead& crf) {
  CheckEmissions(emissions, crf);
  const std::size_t n = emissions.rows();
  const std::size_t k = crf.num_tags();
  if (gold.size() != n) throw ShapeError("gold length does not match emissions");
  for (std::size_t t = 0; t < n; ++t) {
    if (gold[t] < 0 || static_cast<std::size_t>(gold[t]) >= k) {
      throw DataError("gold tag out of range at position " + std::to_string(t));
    }
  }
  const TransitionMask& m = crf.mask;
  if (!m.start[gold[0]]) {
    throw DataError("gold path violates the mask at position 0 (start)");
  }
  for (std::size_t t = 1; t < n; ++t) {
    if (!m.Allowed(gold[t - 1], gold[t])) {
      throw DataError("gold path violates the mask at position " +
                      std::to_string(t));
    }
  }
  if (!m.end[gold[n - 1]]) {
    throw DataError("gold path violates the mask at position " +
                    std::to_string(n - 1) + " (end)");
  }

  const Matrix trans = crf.EffectiveTransitions();
  const auto start = crf.EffectiveStart();
  const auto end = crf.EffectiveEnd();
  const Matrix alpha = ForwardScores(emissions, trans, start);

  Matrix beta(n, k);
  for (std::size_t j = 0; j < k; ++j) beta(n - 1, j) = end[j];
  std::vector<double> buf(k);
  for (std::size_t t = n - 1; t-- > 0;) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        buf[j] = trans(i, j) + emissions(t + 1, j) + beta(t + 1, j);
      }
      beta(t, i) = LogSumExp(buf);
    }
  }
  for (std::size_t j = 0; j < k; ++j) buf[j] = alpha(n - 1, j) + end[j];
  const double log_z = LogSumExp(buf);

  double gold_score = start[gold[0]] + emissions(0, gold[0]);
  for (std::size_t t = 1; t < n; ++t) {
    gold_score += trans(gold[t - 1], gold[t]) + emissions(t, gold[t]);
  }
  gold_score += end[gold[n - 1]];

  NllResult r;
  // log Z >= any path score; clamp away rounding noise.
  r.loss = std::max(0.0, log_z - gold_score);
  r.grads.emissions = Matrix(n, k);
  r.grads.transitions = Matrix(k, k);
  r.grads.start = Matrix(1, k);
  r.grads.end = Matrix(1, k);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < k; ++j) {
      r.grads.emissions(t, j) = std::exp(alpha(t, j) + beta(t, j) - log_z);
    }
  }
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        r.grads.transitions(i, j) +=
            std::exp(alpha(t, i) + trans(i, j) + emissions(t + 1, j) +
                     beta(t + 1, j) - log_z);
      }
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    r.grads.start[j] = r.grads.emissions(0, j);
    r.grads.end[j] = r.grads.emissions(n - 1, j);
  }
  r.grads.start[gold[0]] -= 1.0;
  r.grads.end[gold[n - 1]] -= 1.0;
  for (std::size_t t = 0; t < n; ++t) {
    r.grads.emissions(t, gold[t]) -= 1.0;
    if (t > 0) r.grads.transitions(gold[t - 1], gold[t]) -= 1.0;
  }
  return r;
}

void AccumulateTransitionGrads(const CrfGradients& g, CrfHead& crf) {
  crf.transitions.grad += g.transitions;
  crf.start.grad += g.start;
  crf.end.grad += g.end;
}

ViterbiResult Viterbi(const Matrix& emissions, const CrfHead& crf) {
  CheckEmissions(emissions, crf);
  RequireFeasible(crf.mask, emissions.rows());
  const std::size_t n = emissions.rows();
  const std::size_t k = crf.num_tags();
  const Matrix trans = crf.EffectiveTransitions();
  const auto start = crf.EffectiveStart();
  const auto end = crf.EffectiveEnd();
  Matrix delta(n, k);
  std::vector<std::vector<int>> back(n, std::vector<int>(k, 0));
  for (std::size_t j = 0; j < k; ++j) delta(0, j) = start[j] + emissions(0, j);
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t j = 0; j < k; ++j) {
      int best = 0;
      double best_score = delta(t - 1, 0) + trans(0, j);
      for (std::size_t i = 1; i < k; ++i) {
        const double s = delta(t - 1, i) + trans(i, j);
        if (s > best_score) {
          best_score = s;
          best = static_cast<int>(i);
        }
      }
      delta(t, j) = best_score + emissions(t, j);
      back[t][j] = best;
    }
  }
  int last = 0;
  double best_score = delta(n - 1, 0) + end[0];
  for (std::size_t j = 1; j < k; ++j) {
    const double s = delta(n - 1, j) + end[j];
    if (s > best_score) {
      best_score = s;
      last = static_cast<int>(j);
    }
  }
  ViterbiResult r;
  r.score = best_score;
  r.tags.assign(n, 0);
  r.tags[n - 1] = last;
  for (std::size_t t = n - 1; t > 0; --t) r.tags[t - 1] = back[t][r.tags[t]];
  return r;
}

}  // namespace mtsa
