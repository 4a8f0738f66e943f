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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mtsa/errors.h"
#include "mtsa/numcore/kernels.h"

namespace mtsa {
namespace {

// Below this many multiply-adds the fork/join overhead dominates.
constexpr long long kParallelWork = 1 << 15;

void CheckInner(std::size_t lhs, std::size_t rhs, const char* op,
                const Matrix& a, const Matrix& b) {
  if (lhs != rhs) {
    throw ShapeError(std::string(op) + ": inner dimension mismatch " +
                     a.ShapeString() + " vs " + b.ShapeString());
  }
}

}  // namespace

Matrix MatMul(const Matrix& a, const Matrix& b) {
  CheckInner(a.cols(), b.rows(), "matmul", a, b);
  const long long n = static_cast<long long>(a.rows());
  const std::size_t k = a.cols();
  const std::size_t m = b.cols();
  Matrix out(a.rows(), m);
  const bool par = n * static_cast<long long>(k * m) >= kParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (long long i = 0; i < n; ++i) {
    double* dst = out.row(static_cast<std::size_t>(i)).data();
    const double* ar = a.row(static_cast<std::size_t>(i)).data();
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ar[p];
      const double* br = b.values().data() + p * m;
      for (std::size_t j = 0; j < m; ++j) dst[j] += av * br[j];
    }
  }
  return out;
}

Matrix MatMulTransA(const Matrix& a, const Matrix& b) {
  Matrix out(a.cols(), b.cols());
  MatMulTransAInto(a, b, out);
  return out;
}

void MatMulTransAInto(const Matrix& a, const Matrix& b, Matrix& out) {
  CheckInner(a.rows(), b.rows(), "matmul_trans_a", a, b);
  if (out.rows() != a.cols() || out.cols() != b.cols()) {
    throw ShapeError("matmul_trans_a: output shape " + out.ShapeString());
  }
  const long long n = static_cast<long long>(a.cols());
  const std::size_t k = a.rows();
  const std::size_t m = b.cols();
  const bool par = n * static_cast<long long>(k * m) >= kParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (long long i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    double* dst = out.row(ii).data();
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a(p, ii);
      if (av == 0.0) continue;
      const double* br = b.values().data() + p * m;
      for (std::size_t j = 0; j < m; ++j) dst[j] += av * br[j];
    }
  }
}

Matrix MatMulTransB(const Matrix& a, const Matrix& b) {
  CheckInner(a.cols(), b.cols(), "matmul_trans_b", a, b);
  const long long n = static_cast<long long>(a.rows());
  const std::size_t k = a.cols();
  const std::size_t m = b.rows();
  Matrix out(a.rows(), m);
  const bool par = n * static_cast<long long>(k * m) >= kParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (long long i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double* ar = a.row(ii).data();
    for (std::size_t j = 0; j < m; ++j) {
      const double* br = b.row(j).data();
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += ar[p] * br[p];
      out(ii, j) = s;
    }
  }
  return out;
}

double LogSumExp(std::span<const double> values) {
  if (values.empty()) throw DomainError("log_sum_exp of an empty vector");
  const double mx = *std::max_element(values.begin(), values.end());
  if (values.size() == 1) return mx;
  if (mx == -std::numeric_limits<double>::infinity()) return mx;
  double s = 0.0;
  for (double v : values) s += std::exp(v - mx);
  return mx + std::log(s);
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void Softmax(std::span<const double> logits, std::span<double> out) {
  if (logits.size() != out.size()) throw ShapeError("softmax: length mismatch");
  if (logits.empty()) throw DomainError("softmax of an empty vector");
  const double mx = *std::max_element(logits.begin(), logits.end());
  double s = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    s += out[i];
  }
  for (double& v : out) v /= s;
}

}  // namespace mtsa
