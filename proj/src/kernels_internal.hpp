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

#pragma once

#include "rsmb/kernels.hpp"

namespace rsmb::kernels::detail {

void cgemm_scalar(const cdouble* a, const cdouble* b, cdouble* c, std::size_t m, std::size_t n,
                  std::size_t p);
void interference_scalar(const cdouble* e, const cdouble* w, std::size_t rows, std::size_t n,
                         cdouble* desired, double* leakage);
double sum_abs2_scalar(const cdouble* x, std::size_t n);

#ifdef RSMB_HAVE_AVX2_KERNELS
void cgemm_avx2(const cdouble* a, const cdouble* b, cdouble* c, std::size_t m, std::size_t n,
                std::size_t p);
void interference_avx2(const cdouble* e, const cdouble* w, std::size_t rows, std::size_t n,
                       cdouble* desired, double* leakage);
double sum_abs2_avx2(const cdouble* x, std::size_t n);
#endif

}  // namespace rsmb::kernels::detail
