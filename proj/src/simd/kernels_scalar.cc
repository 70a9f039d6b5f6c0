// Copyright 2026 The FedCAV Authors. All rights reserved.
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

// Reference implementations. Straight loops, no reassociation; these define
// the semantics the SIMD variants are tested against.

#include <cmath>

#include "fedcav/simd/kernels.h"

namespace fedcav::simd {
namespace {

double Dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void AxpyCompensated(double alpha, const double* x, double* hi, double* lo, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double p = alpha * x[i];
    const double pe = std::fma(alpha, x[i], -p);
    const double s = hi[i] + p;
    const double bp = s - hi[i];
    const double se = (hi[i] - (s - bp)) + (p - bp);
    lo[i] += se + pe;
    hi[i] = s;
  }
}

void Scale(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void GemmNT(const double* a, const double* b, const double* bias, double* c,
            std::size_t m, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double s = Dot(a + i * k, b + j * k, k);
      c[i * n + j] = bias ? bias[j] + s : s;
    }
  }
}

void GemmNNAcc(const double* a, const double* b, double* c, std::size_t m,
               std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t kk = 0; kk < k; ++kk) {
      Axpy(a[i * k + kk], b + kk * n, c + i * n, n);
    }
  }
}

void GemmTNAcc(const double* a, const double* b, double* c, std::size_t m,
               std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t kk = 0; kk < k; ++kk) {
      Axpy(a[kk * m + i], b + kk * n, c + i * n, n);
    }
  }
}

void Blend(double* target, const double* source, double tau, std::size_t n) {
  const double keep = 1.0 - tau;
  for (std::size_t i = 0; i < n; ++i) {
    target[i] = tau * source[i] + keep * target[i];
  }
}

void MinMax(const double* x, double* lo, double* hi, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = x[i] < lo[i] ? x[i] : lo[i];
    hi[i] = x[i] > hi[i] ? x[i] : hi[i];
  }
}

void Clamp(double* x, const double* lo, const double* hi, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i] < lo[i] ? lo[i] : x[i];
    x[i] = v > hi[i] ? hi[i] : v;
  }
}

void Adam(double* param, double* m, double* v, const double* grad,
          std::size_t n, const AdamCoefficients& c) {
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    m[i] = c.beta1 * m[i] + c.one_minus_beta1 * g;
    v[i] = c.beta2 * v[i] + c.one_minus_beta2 * (g * g);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    param[i] = param[i] - (c.lr * m_hat) / (std::sqrt(v_hat) + c.eps);
  }
}

bool AllFinite(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) return false;
  }
  return true;
}

constexpr KernelTable kScalarTable = {
    "scalar", Dot,   Axpy,   AxpyCompensated, Scale, GemmNT, GemmNNAcc,
    GemmTNAcc, Blend, MinMax, Clamp, Adam,   AllFinite,
};

}  // namespace

const KernelTable& ScalarKernels() { return kScalarTable; }

}  // namespace fedcav::simd
