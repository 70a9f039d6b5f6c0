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

// AVX2/FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; everything here stays in an anonymous namespace and avoids
// inline library templates so no AVX-encoded COMDAT symbol can leak into the
// rest of the binary.

#include "fedcav/simd/kernels.h"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace fedcav::simd {
namespace {

inline double HSum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Runs `op` over [0, n) in 4-lane steps; the ragged tail goes through a
// zero-padded stack buffer so it executes the same vector instructions.
// Only arrays whose bit is set in `written` are copied back from the tail.
template <int kArrays, typename Op>
inline void ElementWise(double* const (&arrays)[kArrays], unsigned written,
                        std::size_t n, Op op) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) op(arrays, i);
  if (i == n) return;
  alignas(32) double pad[kArrays][4] = {};
  double* tail[kArrays];
  for (int a = 0; a < kArrays; ++a) {
    for (std::size_t t = 0; t < n - i; ++t) pad[a][t] = arrays[a][i + t];
    tail[a] = pad[a];
  }
  op(tail, 0);
  for (int a = 0; a < kArrays; ++a) {
    if ((written & (1u << a)) == 0) continue;
    for (std::size_t t = 0; t < n - i; ++t) arrays[a][i + t] = pad[a][t];
  }
}

double Dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                         _mm256_loadu_pd(b + i + 4), s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8),
                         _mm256_loadu_pd(b + i + 8), s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12),
                         _mm256_loadu_pd(b + i + 12), s3);
  }
  for (; i + 4 <= n; i += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  }
  double s = HSum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  double* arrays[2] = {const_cast<double*>(x), y};
  ElementWise<2>(arrays, 0b10, n, [&](double* const (&p)[2], std::size_t i) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(p[0] + i));
    _mm256_storeu_pd(p[1] + i, _mm256_add_pd(_mm256_loadu_pd(p[1] + i), prod));
  });
}

void AxpyCompensated(double alpha, const double* x, double* hi, double* lo, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  double* arrays[3] = {const_cast<double*>(x), hi, lo};
  ElementWise<3>(arrays, 0b110, n, [&](double* const (&q)[3], std::size_t i) {
    const __m256d vx = _mm256_loadu_pd(q[0] + i);
    const __m256d h = _mm256_loadu_pd(q[1] + i);
    const __m256d p = _mm256_mul_pd(va, vx);
    const __m256d pe = _mm256_fmsub_pd(va, vx, p);
    const __m256d s = _mm256_add_pd(h, p);
    const __m256d bp = _mm256_sub_pd(s, h);
    const __m256d se =
        _mm256_add_pd(_mm256_sub_pd(h, _mm256_sub_pd(s, bp)), _mm256_sub_pd(p, bp));
    _mm256_storeu_pd(q[2] + i, _mm256_add_pd(_mm256_loadu_pd(q[2] + i), _mm256_add_pd(se, pe)));
    _mm256_storeu_pd(q[1] + i, s);
  });
}

void Scale(double alpha, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  double* arrays[1] = {x};
  ElementWise<1>(arrays, 0b1, n, [&](double* const (&p)[1], std::size_t i) {
    _mm256_storeu_pd(p[0] + i, _mm256_mul_pd(_mm256_loadu_pd(p[0] + i), va));
  });
}

void GemmNT(const double* a, const double* b, const double* bias, double* c,
            std::size_t m, std::size_t n, std::size_t k) {
  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    const double* a0 = a + i * k;
    const double* a1 = a0 + k;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const double* b0 = b + j * k;
      const double* b1 = b0 + k;
      const double* b2 = b1 + k;
      const double* b3 = b2 + k;
      __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
      __m256d c02 = _mm256_setzero_pd(), c03 = _mm256_setzero_pd();
      __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
      __m256d c12 = _mm256_setzero_pd(), c13 = _mm256_setzero_pd();
      std::size_t kk = 0;
      for (; kk + 4 <= k; kk += 4) {
        const __m256d va0 = _mm256_loadu_pd(a0 + kk);
        const __m256d va1 = _mm256_loadu_pd(a1 + kk);
        __m256d vb = _mm256_loadu_pd(b0 + kk);
        c00 = _mm256_fmadd_pd(va0, vb, c00);
        c10 = _mm256_fmadd_pd(va1, vb, c10);
        vb = _mm256_loadu_pd(b1 + kk);
        c01 = _mm256_fmadd_pd(va0, vb, c01);
        c11 = _mm256_fmadd_pd(va1, vb, c11);
        vb = _mm256_loadu_pd(b2 + kk);
        c02 = _mm256_fmadd_pd(va0, vb, c02);
        c12 = _mm256_fmadd_pd(va1, vb, c12);
        vb = _mm256_loadu_pd(b3 + kk);
        c03 = _mm256_fmadd_pd(va0, vb, c03);
        c13 = _mm256_fmadd_pd(va1, vb, c13);
      }
      double r[2][4] = {{HSum(c00), HSum(c01), HSum(c02), HSum(c03)},
                        {HSum(c10), HSum(c11), HSum(c12), HSum(c13)}};
      const double* bs[4] = {b0, b1, b2, b3};
      for (; kk < k; ++kk) {
        for (int y = 0; y < 4; ++y) {
          r[0][y] += a0[kk] * bs[y][kk];
          r[1][y] += a1[kk] * bs[y][kk];
        }
      }
      for (int y = 0; y < 4; ++y) {
        const double add = bias ? bias[j + y] : 0.0;
        c[i * n + j + y] = bias ? add + r[0][y] : r[0][y];
        c[(i + 1) * n + j + y] = bias ? add + r[1][y] : r[1][y];
      }
    }
    for (; j < n; ++j) {
      const double s0 = Dot(a0, b + j * k, k);
      const double s1 = Dot(a1, b + j * k, k);
      c[i * n + j] = bias ? bias[j] + s0 : s0;
      c[(i + 1) * n + j] = bias ? bias[j] + s1 : s1;
    }
  }
  for (; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double s = Dot(a + i * k, b + j * k, k);
      c[i * n + j] = bias ? bias[j] + s : s;
    }
  }
}

// c[i, j] += sum_kk a[i * a_row + kk * a_k] * b[kk * n + j]
void GemmAccStrided(const double* a, std::size_t a_row, std::size_t a_k,
                    const double* b, double* c, std::size_t m, std::size_t n,
                    std::size_t k) {
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      __m256d acc[4][2];
      for (int r = 0; r < 4; ++r) {
        acc[r][0] = _mm256_setzero_pd();
        acc[r][1] = _mm256_setzero_pd();
      }
      for (std::size_t kk = 0; kk < k; ++kk) {
        const double* brow = b + kk * n + j;
        const __m256d vb0 = _mm256_loadu_pd(brow);
        const __m256d vb1 = _mm256_loadu_pd(brow + 4);
        const double* acol = a + kk * a_k + i * a_row;
        for (int r = 0; r < 4; ++r) {
          const __m256d va = _mm256_set1_pd(acol[r * a_row]);
          acc[r][0] = _mm256_fmadd_pd(va, vb0, acc[r][0]);
          acc[r][1] = _mm256_fmadd_pd(va, vb1, acc[r][1]);
        }
      }
      for (int r = 0; r < 4; ++r) {
        double* crow = c + (i + r) * n + j;
        _mm256_storeu_pd(crow, _mm256_add_pd(_mm256_loadu_pd(crow), acc[r][0]));
        _mm256_storeu_pd(crow + 4,
                         _mm256_add_pd(_mm256_loadu_pd(crow + 4), acc[r][1]));
      }
    }
    for (; i < m; ++i) {
      __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
      for (std::size_t kk = 0; kk < k; ++kk) {
        const __m256d va = _mm256_set1_pd(a[i * a_row + kk * a_k]);
        acc0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b + kk * n + j), acc0);
        acc1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b + kk * n + j + 4), acc1);
      }
      double* crow = c + i * n + j;
      _mm256_storeu_pd(crow, _mm256_add_pd(_mm256_loadu_pd(crow), acc0));
      _mm256_storeu_pd(crow + 4, _mm256_add_pd(_mm256_loadu_pd(crow + 4), acc1));
    }
  }
  if (j + 4 <= n) {
    for (std::size_t i = 0; i < m; ++i) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t kk = 0; kk < k; ++kk) {
        acc = _mm256_fmadd_pd(_mm256_set1_pd(a[i * a_row + kk * a_k]),
                              _mm256_loadu_pd(b + kk * n + j), acc);
      }
      double* crow = c + i * n + j;
      _mm256_storeu_pd(crow, _mm256_add_pd(_mm256_loadu_pd(crow), acc));
    }
    j += 4;
  }
  for (; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t kk = 0; kk < k; ++kk) {
        s += a[i * a_row + kk * a_k] * b[kk * n + j];
      }
      c[i * n + j] += s;
    }
  }
}

void GemmNNAcc(const double* a, const double* b, double* c, std::size_t m,
               std::size_t n, std::size_t k) {
  GemmAccStrided(a, k, 1, b, c, m, n, k);
}

void GemmTNAcc(const double* a, const double* b, double* c, std::size_t m,
               std::size_t n, std::size_t k) {
  GemmAccStrided(a, 1, m, b, c, m, n, k);
}

void Blend(double* target, const double* source, double tau, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(tau);
  const __m256d vk = _mm256_set1_pd(1.0 - tau);
  double* arrays[2] = {target, const_cast<double*>(source)};
  ElementWise<2>(arrays, 0b01, n, [&](double* const (&p)[2], std::size_t i) {
    const __m256d s = _mm256_mul_pd(vt, _mm256_loadu_pd(p[1] + i));
    const __m256d t = _mm256_mul_pd(vk, _mm256_loadu_pd(p[0] + i));
    _mm256_storeu_pd(p[0] + i, _mm256_add_pd(s, t));
  });
}

void MinMax(const double* x, double* lo, double* hi, std::size_t n) {
  double* arrays[3] = {const_cast<double*>(x), lo, hi};
  ElementWise<3>(arrays, 0b110, n, [](double* const (&p)[3], std::size_t i) {
    const __m256d v = _mm256_loadu_pd(p[0] + i);
    _mm256_storeu_pd(p[1] + i, _mm256_min_pd(v, _mm256_loadu_pd(p[1] + i)));
    _mm256_storeu_pd(p[2] + i, _mm256_max_pd(v, _mm256_loadu_pd(p[2] + i)));
  });
}

void Clamp(double* x, const double* lo, const double* hi, std::size_t n) {
  double* arrays[3] = {x, const_cast<double*>(lo), const_cast<double*>(hi)};
  ElementWise<3>(arrays, 0b001, n, [](double* const (&p)[3], std::size_t i) {
    const __m256d v =
        _mm256_max_pd(_mm256_loadu_pd(p[1] + i), _mm256_loadu_pd(p[0] + i));
    _mm256_storeu_pd(p[0] + i, _mm256_min_pd(_mm256_loadu_pd(p[2] + i), v));
  });
}

void Adam(double* param, double* m, double* v, const double* grad,
          std::size_t n, const AdamCoefficients& c) {
  const __m256d b1 = _mm256_set1_pd(c.beta1);
  const __m256d b2 = _mm256_set1_pd(c.beta2);
  const __m256d omb1 = _mm256_set1_pd(c.one_minus_beta1);
  const __m256d omb2 = _mm256_set1_pd(c.one_minus_beta2);
  const __m256d bc1 = _mm256_set1_pd(c.bias_correction1);
  const __m256d bc2 = _mm256_set1_pd(c.bias_correction2);
  const __m256d lr = _mm256_set1_pd(c.lr);
  const __m256d eps = _mm256_set1_pd(c.eps);
  double* arrays[4] = {param, m, v, const_cast<double*>(grad)};
  ElementWise<4>(arrays, 0b0111, n, [&](double* const (&p)[4], std::size_t i) {
    const __m256d g = _mm256_loadu_pd(p[3] + i);
    const __m256d vm = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(p[1] + i)),
                                     _mm256_mul_pd(omb1, g));
    const __m256d vv =
        _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(p[2] + i)),
                      _mm256_mul_pd(omb2, _mm256_mul_pd(g, g)));
    _mm256_storeu_pd(p[1] + i, vm);
    _mm256_storeu_pd(p[2] + i, vv);
    const __m256d m_hat = _mm256_div_pd(vm, bc1);
    const __m256d v_hat = _mm256_div_pd(vv, bc2);
    const __m256d step = _mm256_div_pd(
        _mm256_mul_pd(lr, m_hat), _mm256_add_pd(_mm256_sqrt_pd(v_hat), eps));
    _mm256_storeu_pd(p[0] + i, _mm256_sub_pd(_mm256_loadu_pd(p[0] + i), step));
  });
}

bool AllFinite(const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d d = _mm256_sub_pd(v, v);  // NaN for NaN and +-Inf
    if (_mm256_movemask_pd(_mm256_cmp_pd(d, zero, _CMP_EQ_OQ)) != 0xF) {
      return false;
    }
  }
  for (; i < n; ++i) {
    if (!(x[i] - x[i] == 0.0)) return false;
  }
  return true;
}

constexpr KernelTable kAvx2Table = {
    "avx2",    Dot,   Axpy,   AxpyCompensated, Scale, GemmNT, GemmNNAcc,
    GemmTNAcc, Blend, MinMax, Clamp, Adam,   AllFinite,
};

}  // namespace

const KernelTable* Avx2KernelTableIfCompiled() { return &kAvx2Table; }

}  // namespace fedcav::simd

#endif  // __AVX2__ && __FMA__
