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

#include "kernels_internal.hpp"

namespace rsmb::kernels::detail {

// Products are expanded by hand so the reference does not depend on the
// library's NaN-recovering complex multiply.

void cgemm_scalar(const cdouble* a, const cdouble* b, cdouble* c, std::size_t m, std::size_t n,
                  std::size_t p) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const cdouble x = a[i * n + k];
        const cdouble y = b[k * p + j];
        re += x.real() * y.real() - x.imag() * y.imag();
        im += x.real() * y.imag() + x.imag() * y.real();
      }
      c[i * p + j] = {re, im};
    }
  }
}

void interference_scalar(const cdouble* e, const cdouble* w, std::size_t rows, std::size_t n,
                         cdouble* desired, double* leakage) {
  for (std::size_t k = 0; k < rows; ++k) {
    double leak = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const cdouble x = e[k * n + j];
        const cdouble y = w[j * rows + i];
        re += x.real() * y.real() - x.imag() * y.imag();
        im += x.real() * y.imag() + x.imag() * y.real();
      }
      if (i == k) {
        desired[k] = {re, im};
      } else {
        leak += re * re + im * im;
      }
    }
    leakage[k] = leak;
  }
}

double sum_abs2_scalar(const cdouble* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

}  // namespace rsmb::kernels::detail
