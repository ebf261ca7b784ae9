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
#include <optional>
#include <span>
#include <vector>

#include "rsmb/complex_matrix.hpp"

namespace rsmb::thp {

/// Where the diagonal scaling sits: at the transmitter (centralized) or at
/// each receiver (decentralized).
enum class Scheme { centralized, decentralized };

/// Filters of one THP private precoder, built from a (possibly permuted)
/// channel estimate H = L Q.
///
///   F = Q^H                      feedforward, Nt x K, orthonormal columns
///   g_k = 1 / l_kk               diagonal scaling
///   B = diag(g) L   (dec.)       unit-diagonal feedback
///   B = L diag(g)   (cen.)
///   W = F L^-1 diag(g)^-1 (dec.) composite private columns: the map from the
///   W = F L^-1            (cen.) effective symbols s + d to the antennas,
///                                before beta
struct ThpFilterSet {
  Scheme scheme = Scheme::decentralized;
  ComplexMatrix F;
  ComplexMatrix L;
  std::vector<double> g;
  ComplexMatrix B;
  ComplexMatrix W;
  std::optional<double> beta;

  std::size_t users() const noexcept { return g.size(); }
  double lhat(std::size_t k) const noexcept { return L(k, k).real(); }
  double inverse_lhat2_sum() const noexcept;  // sum_k l_kk^-2
};

/// Propagates Error(rank_deficient) from the LQ factorization.
ThpFilterSet build_thp_filters(const ComplexMatrix& h_est_permuted, Scheme scheme);

/// Scaling that spends Etr - pc_norm2 on the private streams:
/// sqrt(P / K) (decentralized), sqrt(P / sum_k l_kk^-2) (centralized).
/// Throws Error(no_private_power) when Etr <= pc_norm2.
double compute_beta(const ThpFilterSet& filters, double etr, double pc_norm2);
double compute_beta(Scheme scheme, std::size_t users, double inverse_lhat2_sum, double etr,
                    double pc_norm2);

struct ModuloParams {
  double lambda;

  static ModuloParams qpsk() noexcept;   // 2 sqrt(2), unit-variance QPSK
  static ModuloParams qam16() noexcept;  // 8 / sqrt(10), unit-variance 16-QAM
};

/// z - floor(Re z / lambda + 1/2) lambda - j floor(Im z / lambda + 1/2) lambda.
cdouble modulo_reduce(cdouble z, ModuloParams params);

struct EncodedSymbols {
  ComplexVector v;  // modulo-reduced feedback output
  ComplexVector d;  // lattice perturbation with B v = s + d
};

/// Successive pre-subtraction v_i = M(s_i - sum_{j<i} b_ij v_j).
EncodedSymbols thp_encode(std::span<const cdouble> s, const ComplexMatrix& b, ModuloParams params);

/// x = p_c s_c + beta F v (decentralized) or p_c s_c + beta F diag(g) v
/// (centralized). Requires filters.beta.
ComplexVector build_transmit_vector(const ThpFilterSet& filters, std::span<const cdouble> v,
                                    cdouble s_c, std::span<const cdouble> p_c);

}  // namespace rsmb::thp
