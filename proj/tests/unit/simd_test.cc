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

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "doctest.h"
#include "fedcav/simd/kernels.h"
#include "test_support.h"

using namespace fedcav;
using fedcav::testing::RandomVector;

namespace {

bool BitEqual(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

// |sum a_i b_i| error bound for an n-term reduction in either order.
double DotBound(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] * b[i]);
  return 2.0 * (n + 1) * std::numeric_limits<double>::epsilon() * s + 1e-300;
}

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar kernels are always available and listed first") {
  const auto all = simd::AvailableKernels();
  REQUIRE(!all.empty());
  CHECK(std::string(all.front()->name) == "scalar");
  CHECK(simd::SelectKernels("scalar"));
  CHECK(std::string(simd::Active().name) == "scalar");
  CHECK_FALSE(simd::SelectKernels("sse9"));
  CHECK(simd::SelectKernels("auto"));
}

TEST_CASE("every variant matches the scalar reference") {
  const simd::KernelTable& ref = simd::ScalarKernels();
  std::mt19937_64 rng(2024);
  for (const simd::KernelTable* k : simd::AvailableKernels()) {
    CAPTURE(k->name);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = rng() % 67;  // covers empty, sub-vector and tail sizes
      const auto x = RandomVector(rng, n, -3, 3);
      const auto y0 = RandomVector(rng, n, -3, 3);
      const double alpha = std::uniform_real_distribution<double>(-2, 2)(rng);

      // Element-wise kernels: bit-identical.
      auto ya = y0, yb = y0;
      ref.axpy(alpha, x.data(), ya.data(), n);
      k->axpy(alpha, x.data(), yb.data(), n);
      CHECK(BitEqual(ya, yb));

      ya = y0, yb = y0;
      auto ea = x, eb = x;
      ref.axpy_compensated(alpha, x.data(), ya.data(), ea.data(), n);
      k->axpy_compensated(alpha, x.data(), yb.data(), eb.data(), n);
      CHECK(BitEqual(ya, yb));
      CHECK(BitEqual(ea, eb));

      ya = y0, yb = y0;
      ref.scale(alpha, ya.data(), n);
      k->scale(alpha, yb.data(), n);
      CHECK(BitEqual(ya, yb));

      ya = y0, yb = y0;
      ref.blend(ya.data(), x.data(), 0.005, n);
      k->blend(yb.data(), x.data(), 0.005, n);
      CHECK(BitEqual(ya, yb));

      auto lo_a = y0, hi_a = y0, lo_b = y0, hi_b = y0;
      ref.min_max(x.data(), lo_a.data(), hi_a.data(), n);
      k->min_max(x.data(), lo_b.data(), hi_b.data(), n);
      CHECK(BitEqual(lo_a, lo_b));
      CHECK(BitEqual(hi_a, hi_b));

      std::vector<double> lo(n, -1.0), hi(n, 1.5);
      ya = x, yb = x;
      ref.clamp(ya.data(), lo.data(), hi.data(), n);
      k->clamp(yb.data(), lo.data(), hi.data(), n);
      CHECK(BitEqual(ya, yb));

      const simd::AdamCoefficients c{1e-3, 0.9, 0.999, 0.1, 0.001, 1e-8,
                                     1 - std::pow(0.9, 3), 1 - std::pow(0.999, 3)};
      auto pa = y0, pb = y0;
      auto ma = RandomVector(rng, n), mb = ma;
      auto va = RandomVector(rng, n, 0, 1), vb = va;
      ref.adam(pa.data(), ma.data(), va.data(), x.data(), n, c);
      k->adam(pb.data(), mb.data(), vb.data(), x.data(), n, c);
      CHECK(BitEqual(pa, pb));
      CHECK(BitEqual(ma, mb));
      CHECK(BitEqual(va, vb));

      auto bad = x;
      if (n > 0) bad[rng() % n] = std::numeric_limits<double>::quiet_NaN();
      CHECK(ref.all_finite(x.data(), n) == k->all_finite(x.data(), n));
      CHECK(ref.all_finite(bad.data(), n) == k->all_finite(bad.data(), n));
      if (n > 0) CHECK_FALSE(k->all_finite(bad.data(), n));

      // Reductions: within the summation-order bound.
      const double d_ref = ref.dot(x.data(), y0.data(), n);
      const double d_k = k->dot(x.data(), y0.data(), n);
      CHECK(std::abs(d_ref - d_k) <= DotBound(x.data(), y0.data(), n));
    }
  }
}

TEST_CASE("gemm variants agree within the reduction bound") {
  const simd::KernelTable& ref = simd::ScalarKernels();
  std::mt19937_64 rng(7);
  for (const simd::KernelTable* k : simd::AvailableKernels()) {
    CAPTURE(k->name);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t m = 1 + rng() % 9, n = 1 + rng() % 13, kk = 1 + rng() % 19;
      const auto a = RandomVector(rng, m * kk);
      const auto b = RandomVector(rng, n * kk);
      const auto bias = RandomVector(rng, n);
      std::vector<double> c1(m * n), c2(m * n);
      ref.gemm_nt(a.data(), b.data(), bias.data(), c1.data(), m, n, kk);
      k->gemm_nt(a.data(), b.data(), bias.data(), c2.data(), m, n, kk);
      for (std::size_t i = 0; i < m * n; ++i) {
        const double bound =
            DotBound(a.data() + (i / n) * kk, b.data() + (i % n) * kk, kk) + 1e-15;
        CHECK(std::abs(c1[i] - c2[i]) <= bound);
      }
      // Independent naive oracle for the scalar reference itself.
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
          double s = bias[j];
          for (std::size_t t = 0; t < kk; ++t) s += a[r * kk + t] * b[j * kk + t];
          CHECK(std::abs(s - c1[r * n + j]) < 1e-12);
        }
      }

      const auto bn = RandomVector(rng, kk * n);
      const auto c0 = RandomVector(rng, m * n);
      c1 = c0, c2 = c0;
      ref.gemm_nn_acc(a.data(), bn.data(), c1.data(), m, n, kk);
      k->gemm_nn_acc(a.data(), bn.data(), c2.data(), m, n, kk);
      for (std::size_t i = 0; i < m * n; ++i) CHECK(std::abs(c1[i] - c2[i]) < 1e-12);

      const auto at = RandomVector(rng, kk * m);
      c1 = c0, c2 = c0;
      ref.gemm_tn_acc(at.data(), bn.data(), c1.data(), m, n, kk);
      k->gemm_tn_acc(at.data(), bn.data(), c2.data(), m, n, kk);
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
          double s = c0[r * n + j];
          for (std::size_t t = 0; t < kk; ++t) s += at[t * m + r] * bn[t * n + j];
          CHECK(std::abs(s - c1[r * n + j]) < 1e-12);
          CHECK(std::abs(s - c2[r * n + j]) < 1e-12);
        }
      }
    }
  }
}

}  // TEST_SUITE

TEST_CASE("compensated axpy recovers a cancelled sum") {
  for (const simd::KernelTable* k : simd::AvailableKernels()) {
    CAPTURE(k->name);
    // 1 + 1e-17 - 1 vanishes in plain double arithmetic.
    std::vector<double> hi(5, 0.0), lo(5, 0.0);
    const std::vector<double> a(5, 1.0), b(5, 1e-17), c(5, -1.0);
    k->axpy_compensated(1.0, a.data(), hi.data(), lo.data(), 5);
    k->axpy_compensated(1.0, b.data(), hi.data(), lo.data(), 5);
    k->axpy_compensated(1.0, c.data(), hi.data(), lo.data(), 5);
    for (int i = 0; i < 5; ++i) CHECK(hi[i] + lo[i] == 1e-17);
    // Product rounding: 3 * 0.1 is inexact; the error term carries it.
    std::vector<double> h2(1, 0.0), l2(1, 0.0);
    const std::vector<double> tenth(1, 0.1);
    k->axpy_compensated(3.0, tenth.data(), h2.data(), l2.data(), 1);
    CHECK(l2[0] == std::fma(3.0, 0.1, -(3.0 * 0.1)));
  }
}
