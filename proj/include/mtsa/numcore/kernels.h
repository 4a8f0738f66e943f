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

#ifndef MTSA_NUMCORE_KERNELS_H_
#define MTSA_NUMCORE_KERNELS_H_

#include <span>

#include "mtsa/numcore/matrix.h"

namespace mtsa {

// Dense products. These are OpenMP-parallel over output rows; every output
// element is accumulated by one thread in a fixed order, so results are
// bit-identical to the serial reference regardless of thread count.
//
//   MatMul(a, b)        = a * b
//   MatMulTransA(a, b)  = a^T * b
//   MatMulTransB(a, b)  = a * b^T
Matrix MatMul(const Matrix& a, const Matrix& b);
Matrix MatMulTransA(const Matrix& a, const Matrix& b);
Matrix MatMulTransB(const Matrix& a, const Matrix& b);

// Accumulating variants: out += product. Used for gradient buffers.
void MatMulTransAInto(const Matrix& a, const Matrix& b, Matrix& out);

namespace serial {

// Plain triple loops kept as the reference the parallel kernels are tested
// and benchmarked against.
Matrix MatMul(const Matrix& a, const Matrix& b);
Matrix MatMulTransA(const Matrix& a, const Matrix& b);
Matrix MatMulTransB(const Matrix& a, const Matrix& b);

}  // namespace serial

// log(sum(exp(v))) with max shift. Throws DomainError on empty input.
double LogSumExp(std::span<const double> values);

// Numerically stable logistic function.
double Sigmoid(double x);

// Softmax of a vector into `out` (same length).
void Softmax(std::span<const double> logits, std::span<double> out);

}  // namespace mtsa

#endif  // MTSA_NUMCORE_KERNELS_H_
