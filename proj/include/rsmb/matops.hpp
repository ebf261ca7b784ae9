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

#include <cstddef>
#include <span>
#include <vector>

#include "rsmb/complex_matrix.hpp"

namespace rsmb::matops {

/// Thin LQ factors of a K x Nt matrix (K <= Nt): A = L * Q with L lower
/// triangular, real positive diagonal, and Q (K x Nt) having orthonormal rows.
struct LqFactors {
  ComplexMatrix L;
  ComplexMatrix Q;
};

// Magnitude below which a diagonal entry of L marks the input as rank deficient.
inline constexpr double kRankTolerance = 1e-12;

/// Householder LQ. Throws Error(rank_deficient) when a diagonal entry of L
/// falls below kRankTolerance, Error(invalid_argument) when rows > cols or the
/// input has non-finite entries.
LqFactors lq_decompose(const ComplexMatrix& a);

struct PowerIterationOptions {
  double tol = 1e-12;  // on the change of the phase-normalized iterate
  int max_iterations = 10000;
};

struct DominantDirection {
  ComplexVector v;       // unit norm, first significant entry real positive
  double sigma_max = 0;  // ||A v||
  int iterations = 0;
  bool converged = false;  // false: v is the last iterate, not a converged one
};

/// Top right-singular direction by power iteration on A^H A. Never throws on
/// slow convergence; check `converged`.
DominantDirection dominant_right_singular_direction(const ComplexMatrix& a,
                                                    PowerIterationOptions options = {});

/// Zero-based permutation: output row i is input row perm[i].
using Permutation = std::vector<std::size_t>;

bool is_permutation(std::span<const std::size_t> perm, std::size_t n) noexcept;
Permutation inverse_permutation(std::span<const std::size_t> perm);

/// Throws Error(invalid_permutation) unless perm is a bijection on the rows.
ComplexMatrix permute_rows(const ComplexMatrix& a, std::span<const std::size_t> perm);

/// Inverse of a lower-triangular matrix with nonzero diagonal.
ComplexMatrix lower_triangular_inverse(const ComplexMatrix& l);

/// Solves L x = b by forward substitution.
ComplexVector forward_substitute(const ComplexMatrix& l, std::span<const cdouble> b);

}  // namespace rsmb::matops
