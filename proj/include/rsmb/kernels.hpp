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

// Data-parallel inner loops of the rate evaluation. Every kernel has a scalar
// reference version; wider variants are selected at runtime from what the CPU
// reports and are checked against the reference in tests/kernels_test.cpp.

#include <cstddef>
#include <optional>
#include <string_view>

#include "rsmb/complex_matrix.hpp"

namespace rsmb::kernels {

enum class Isa { scalar, avx2 };

// c (m x p) = a (m x n) * b (n x p); all row-major, c must not alias a or b.
using CgemmFn = void (*)(const cdouble* a, const cdouble* b, cdouble* c, std::size_t m,
                         std::size_t n, std::size_t p);

// Projects the error rows onto the composite private columns. For each row k
// of e (rows x n) with w (n x rows):
//   desired[k] = sum_j e[k,j] w[j,k]
//   leakage[k] = sum_{i != k} |sum_j e[k,j] w[j,i]|^2
using InterferenceFn = void (*)(const cdouble* e, const cdouble* w, std::size_t rows,
                                std::size_t n, cdouble* desired, double* leakage);

// sum_i |x_i|^2
using SumAbs2Fn = double (*)(const cdouble* x, std::size_t n);

struct KernelTable {
  Isa isa;
  CgemmFn cgemm;
  InterferenceFn interference;
  SumAbs2Fn sum_abs2;
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant was not compiled in.
const KernelTable* avx2_table() noexcept;

bool cpu_supports(Isa isa) noexcept;

// Table for a specific ISA; throws Error(invalid_argument) if unavailable.
const KernelTable& table_for(Isa isa);

// Best supported table, unless overridden by select() or the RSMB_KERNEL
// environment variable ("scalar", "avx2", "auto").
const KernelTable& active() noexcept;
Isa active_isa() noexcept;

// Call before spawning workers; not synchronized against concurrent kernel use.
void select(Isa isa);
void select_auto() noexcept;

std::string_view name(Isa isa) noexcept;
std::optional<Isa> parse_isa(std::string_view text) noexcept;

}  // namespace rsmb::kernels
