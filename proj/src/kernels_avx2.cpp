// Copyright 2026 The rsmb Authors. All Rights Reserved.
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

// Compiled with -mavx2 -mfma; only reached after cpu_supports(Isa::avx2).

#include <immintrin.h>

#include <array>
#include <vector>

#include "kernels_internal.hpp"

namespace rsmb::kernels::detail {
namespace {

inline const double* as_doubles(const cdouble* z) { return reinterpret_cast<const double*>(z); }
inline double* as_doubles(cdouble* z) { return reinterpret_cast<double*>(z); }

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Returns a[0..n) . b[0..n) for contiguous complex vectors, two lanes at a time.
inline cdouble dot_contiguous(const cdouble* a, const cdouble* b, std::size_t n) {
  __m256d acc_r = _mm256_setzero_pd();
  __m256d acc_i = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d av = _mm256_loadu_pd(as_doubles(a + k));
    const __m256d bv = _mm256_loadu_pd(as_doubles(b + k));
    const __m256d ar = _mm256_movedup_pd(av);         // re re re re
    const __m256d ai = _mm256_permute_pd(av, 0b1111);  // im im im im
    const __m256d bs = _mm256_permute_pd(bv, 0b0101);  // swap re/im
    acc_r = _mm256_fmadd_pd(ar, bv, acc_r);
    acc_i = _mm256_fmadd_pd(ai, bs, acc_i);
  }
  const __m256d prod = _mm256_addsub_pd(acc_r, acc_i);
  alignas(32) std::array<double, 4> lanes{};
  _mm256_store_pd(lanes.data(), prod);
  double re = lanes[0] + lanes[2];
  double im = lanes[1] + lanes[3];
  for (; k < n; ++k) {
    re += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
  }
  return {re, im};
}

}  // namespace

void cgemm_avx2(const cdouble* a, const cdouble* b, cdouble* c, std::size_t m, std::size_t n,
                std::size_t p) {
  if (p == 1) {
    for (std::size_t i = 0; i < m; ++i) c[i] = dot_contiguous(a + i * n, b, n);
    return;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const cdouble* arow = a + i * n;
    std::size_t j = 0;
    for (; j + 2 <= p; j += 2) {
      __m256d acc_r = _mm256_setzero_pd();
      __m256d acc_i = _mm256_setzero_pd();
      for (std::size_t k = 0; k < n; ++k) {
        const __m256d ar = _mm256_set1_pd(arow[k].real());
        const __m256d ai = _mm256_set1_pd(arow[k].imag());
        const __m256d bv = _mm256_loadu_pd(as_doubles(b + k * p + j));
        const __m256d bs = _mm256_permute_pd(bv, 0b0101);
        acc_r = _mm256_fmadd_pd(ar, bv, acc_r);
        acc_i = _mm256_fmadd_pd(ai, bs, acc_i);
      }
      _mm256_storeu_pd(as_doubles(c + i * p + j), _mm256_addsub_pd(acc_r, acc_i));
    }
    for (; j < p; ++j) {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const cdouble y = b[k * p + j];
        re += arow[k].real() * y.real() - arow[k].imag() * y.imag();
        im += arow[k].real() * y.imag() + arow[k].imag() * y.real();
      }
      c[i * p + j] = {re, im};
    }
  }
}

void interference_avx2(const cdouble* e, const cdouble* w, std::size_t rows, std::size_t n,
                       cdouble* desired, double* leakage) {
  constexpr std::size_t kStack = 64;
  std::array<cdouble, kStack> stack_buf;
  std::vector<cdouble> heap_buf;
  cdouble* projected = stack_buf.data();
  if (rows > kStack) {
    heap_buf.resize(rows);
    projected = heap_buf.data();
  }
  for (std::size_t k = 0; k < rows; ++k) {
    cgemm_avx2(e + k * n, w, projected, 1, n, rows);
    double leak = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == k) continue;
      leak += projected[i].real() * projected[i].real() + projected[i].imag() * projected[i].imag();
    }
    desired[k] = projected[k];
    leakage[k] = leak;
  }
}

double sum_abs2_avx2(const cdouble* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(as_doubles(x + i));
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double total = horizontal_sum(acc);
  for (; i < n; ++i) total += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return total;
}

}  // namespace rsmb::kernels::detail
