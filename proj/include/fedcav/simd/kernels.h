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

#ifndef FEDCAV_SIMD_KERNELS_H_
#define FEDCAV_SIMD_KERNELS_H_

#include <cstddef>
#include <string_view>
#include <vector>

namespace fedcav::simd {

// Precomputed per-step Adam constants. bias_correction{1,2} = 1 - beta^t.
struct AdamCoefficients {
  double lr;
  double beta1;
  double beta2;
  double one_minus_beta1;
  double one_minus_beta2;
  double eps;
  double bias_correction1;
  double bias_correction2;
};

// Function table for the double-precision inner loops. All matrices are
// dense row-major. Every variant computes the same mathematical function:
//
//   * element-wise kernels (axpy, axpy_compensated, scale, blend, min_max, clamp, adam,
//     all_finite) are bit-identical across variants;
//   * reductions (dot, gemm_*) may differ by summation order and FMA
//     rounding, bounded by the usual n*eps*sum|a_i b_i| error.
struct KernelTable {
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // (hi + lo) += alpha * x with the rounding error of the product and of the
  // sum carried into lo (fma two-product, two-sum). hi + lo then holds the
  // running sum to about twice working precision.
  void (*axpy_compensated)(double alpha, const double* x, double* hi, double* lo,
                           std::size_t n);
  // x *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  // c[m x n] = a[m x k] * b[n x k]^T (+ bias[n] broadcast over rows if set)
  void (*gemm_nt)(const double* a, const double* b, const double* bias,
                  double* c, std::size_t m, std::size_t n, std::size_t k);
  // c[m x n] += a[m x k] * b[k x n]
  void (*gemm_nn_acc)(const double* a, const double* b, double* c,
                      std::size_t m, std::size_t n, std::size_t k);
  // c[m x n] += a[k x m]^T * b[k x n]
  void (*gemm_tn_acc)(const double* a, const double* b, double* c,
                      std::size_t m, std::size_t n, std::size_t k);
  // target = tau * source + (1 - tau) * target
  void (*blend)(double* target, const double* source, double tau,
                std::size_t n);
  // lo = min(lo, x), hi = max(hi, x) element-wise
  void (*min_max)(const double* x, double* lo, double* hi, std::size_t n);
  // x = min(max(x, lo), hi) element-wise
  void (*clamp)(double* x, const double* lo, const double* hi, std::size_t n);
  // One bias-corrected Adam update over n parameters.
  void (*adam)(double* param, double* m, double* v, const double* grad,
               std::size_t n, const AdamCoefficients& c);
  bool (*all_finite)(const double* x, std::size_t n);
};

const KernelTable& ScalarKernels();
// nullptr when the variant was not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* Avx2Kernels();

// Every variant usable on this machine, scalar first.
std::vector<const KernelTable*> AvailableKernels();

// The table used by the rest of the library. Chosen on first use from the
// FEDCAV_SIMD environment variable ("scalar", "avx2", "auto"; default auto,
// which picks the widest available variant).
const KernelTable& Active();

// Overrides the active table. Returns false if `name` is unavailable.
// Not meant to be called while other threads run kernels.
bool SelectKernels(std::string_view name);

}  // namespace fedcav::simd

#endif  // FEDCAV_SIMD_KERNELS_H_
