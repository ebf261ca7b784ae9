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

#include "rsmb/thp.hpp"

#include <cmath>

#include "rsmb/error.hpp"
#include "rsmb/matops.hpp"

namespace rsmb::thp {

double ThpFilterSet::inverse_lhat2_sum() const noexcept {
  double acc = 0.0;
  for (double gk : g) acc += gk * gk;
  return acc;
}

ThpFilterSet build_thp_filters(const ComplexMatrix& h_est_permuted, Scheme scheme) {
  auto [l, q] = matops::lq_decompose(h_est_permuted);
  const std::size_t k = l.rows();

  ThpFilterSet out;
  out.scheme = scheme;
  out.F = q.adjoint();
  out.g.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.g[i] = 1.0 / l(i, i).real();

  out.B = ComplexMatrix(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      out.B(i, j) = scheme == Scheme::decentralized ? out.g[i] * l(i, j) : l(i, j) * out.g[j];
    }
    out.B(i, i) = 1.0;
  }

  ComplexMatrix l_inv = matops::lower_triangular_inverse(l);
  if (scheme == Scheme::decentralized) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) l_inv(i, j) *= l(j, j).real();
  }
  out.W = out.F * l_inv;
  out.L = std::move(l);
  return out;
}

double compute_beta(Scheme scheme, std::size_t users, double inverse_lhat2_sum, double etr,
                    double pc_norm2) {
  const double private_power = etr - pc_norm2;
  if (!(private_power > 0.0)) {
    throw Error(ErrorCode::no_private_power, "common precoder uses the whole power budget");
  }
  const double denom =
      scheme == Scheme::decentralized ? static_cast<double>(users) : inverse_lhat2_sum;
  return std::sqrt(private_power / denom);
}

double compute_beta(const ThpFilterSet& filters, double etr, double pc_norm2) {
  return compute_beta(filters.scheme, filters.users(), filters.inverse_lhat2_sum(), etr,
                      pc_norm2);
}

ModuloParams ModuloParams::qpsk() noexcept { return {2.0 * std::sqrt(2.0)}; }
ModuloParams ModuloParams::qam16() noexcept { return {8.0 / std::sqrt(10.0)}; }

namespace {

// Lattice offset subtracted from one real coordinate.
double lattice_shift(double x, double lambda) { return std::floor(x / lambda + 0.5) * lambda; }

double wrap(double x, double lambda) {
  double r = x - lattice_shift(x, lambda);
  // Rounding in x / lambda can leave r a hair outside [-lambda/2, lambda/2).
  if (r >= lambda / 2) r -= lambda;
  if (r < -lambda / 2) r += lambda;
  return r;
}

}  // namespace

cdouble modulo_reduce(cdouble z, ModuloParams params) {
  return {wrap(z.real(), params.lambda), wrap(z.imag(), params.lambda)};
}

EncodedSymbols thp_encode(std::span<const cdouble> s, const ComplexMatrix& b,
                          ModuloParams params) {
  const std::size_t k = s.size();
  if (b.rows() != k || b.cols() != k) throw Error(ErrorCode::shape_mismatch, "thp_encode");
  if (!(params.lambda > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda must be > 0");

  EncodedSymbols out{ComplexVector(k), ComplexVector(k)};
  for (std::size_t i = 0; i < k; ++i) {
    cdouble pre = s[i];
    for (std::size_t j = 0; j < i; ++j) pre -= b(i, j) * out.v[j];
    out.v[i] = modulo_reduce(pre, params);
    // v_i = s_i - sum b_ij v_j + d_i, with d_i on the lattice.
    const double dr = std::round((out.v[i].real() - pre.real()) / params.lambda) * params.lambda;
    const double di = std::round((out.v[i].imag() - pre.imag()) / params.lambda) * params.lambda;
    out.d[i] = {dr, di};
  }
  return out;
}

ComplexVector build_transmit_vector(const ThpFilterSet& filters, std::span<const cdouble> v,
                                    cdouble s_c, std::span<const cdouble> p_c) {
  if (!filters.beta) throw Error(ErrorCode::invalid_argument, "filters.beta is not set");
  const std::size_t k = filters.users();
  const std::size_t nt = filters.F.rows();
  if (v.size() != k || p_c.size() != nt) throw Error(ErrorCode::shape_mismatch, "transmit vector");

  ComplexVector stream(v.begin(), v.end());
  if (filters.scheme == Scheme::centralized) {
    for (std::size_t i = 0; i < k; ++i) stream[i] *= filters.g[i];
  }
  ComplexVector x = filters.F * std::span<const cdouble>(stream);
  for (std::size_t a = 0; a < nt; ++a) x[a] = p_c[a] * s_c + *filters.beta * x[a];
  return x;
}

}  // namespace rsmb::thp
