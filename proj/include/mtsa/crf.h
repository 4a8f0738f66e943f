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

#ifndef MTSA_CRF_H_
#define MTSA_CRF_H_

#include <cstddef>
#include <string>
#include <vector>

#include "mtsa/numcore/matrix.h"
#include "mtsa/numcore/optim.h"
#include "mtsa/numcore/rng.h"
#include "mtsa/tagging.h"

namespace mtsa {

// Score added for a disallowed start, transition or end. Large enough that
// such paths vanish from exp-space sums, small enough to stay NaN-free.
inline constexpr double kDisallowedScore = -1e4;

// Which tag transitions a decoder may use, plus start/end permissions.
struct TransitionMask {
  std::size_t num_tags = 0;
  std::vector<char> transitions;  // num_tags x num_tags, [from * K + to]
  std::vector<char> start;
  std::vector<char> end;

  static TransitionMask Permissive(std::size_t num_tags);

  bool Allowed(std::size_t from, std::size_t to) const {
    return transitions[from * num_tags + to] != 0;
  }
  std::size_t CountAllowedTransitions() const;
  friend bool operator==(const TransitionMask&, const TransitionMask&) = default;
};

// BIOUL rules over the scheme's tag order:
//   O -> O, B-*, U-*        B-c, I-c -> I-c, L-c        L-c, U-c -> O, B-*, U-*
//   start: O, B-*, U-*      end: O, L-*, U-*
// Throws ConfigError on an empty category set.
TransitionMask BuildBioulConstraints(const std::vector<std::string>& categories);

// BIO: I-c only after B-c or I-c, never at the start. Plain: permissive.
TransitionMask BuildConstraints(const LabelScheme& scheme);

// Linear-chain CRF head: affine emission projection followed by
// transition, start and end scores.
class CrfHead {
 public:
  CrfHead() = default;
  CrfHead(std::size_t feature_dim, TransitionMask mask);

  std::size_t feature_dim() const { return projection.value.rows(); }
  std::size_t num_tags() const { return mask.num_tags; }

  // Projection uniform in +-sqrt(1 / feature_dim); everything else zero.
  void Initialize(SeededRng& rng);

  // n x K emission scores. Throws ShapeError on a feature-width mismatch.
  Matrix Emissions(const Matrix& features) const;
  // Accumulates projection/bias gradients and returns d(loss)/d(features).
  Matrix BackwardEmissions(const Matrix& features, const Matrix& d_emissions);

  // Transition/start/end scores with the mask penalty folded in.
  Matrix EffectiveTransitions() const;
  std::vector<double> EffectiveStart() const;
  std::vector<double> EffectiveEnd() const;

  ParamList Params() {
    return {&projection, &bias, &transitions, &start, &end};
  }
  std::size_t ParameterCount() const;
  static std::size_t ParameterCount(std::size_t feature_dim,
                                    std::size_t num_tags);

  Parameter projection;   // d x K
  Parameter bias;         // 1 x K
  Parameter transitions;  // K x K, [from, to]
  Parameter start;        // 1 x K
  Parameter end;          // 1 x K
  TransitionMask mask;
};

// Score of one tag path, mask penalties included.
double PathScore(const Matrix& emissions, const std::vector<int>& tags,
                 const CrfHead& crf);

// Throws InfeasibleLatticeError when no path of length n survives the mask.
void RequireFeasible(const TransitionMask& mask, std::size_t n);

// log of the sum of exp(path score) over all paths (forward algorithm).
double LogPartition(const Matrix& emissions, const CrfHead& crf);

struct CrfGradients {
  Matrix emissions;    // n x K
  Matrix transitions;  // K x K
  Matrix start;        // 1 x K
  Matrix end;          // 1 x K
};

struct NllResult {
  double loss = 0.0;
  CrfGradients grads;
};

// Negative log-likelihood of `gold` and its gradient (marginals from
// forward-backward minus gold counts). The gold path must be allowed by the
// mask; otherwise DataError names the offending position.
NllResult NllAndGrad(const Matrix& emissions, const std::vector<int>& gold,
                     const CrfHead& crf);

// Adds CRF gradients into the head's transition/start/end grad buffers.
void AccumulateTransitionGrads(const CrfGradients& g, CrfHead& crf);

struct ViterbiResult {
  std::vector<int> tags;
  double score = 0.0;
};

// Best path under the same scoring as LogPartition. Ties go to the lowest
// tag index at every backtrack step.
ViterbiResult Viterbi(const Matrix& emissions, const CrfHead& crf);

}  // namespace mtsa

#endif  // MTSA_CRF_H_
