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

#include "rsmb/matops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsmb/error.hpp"

namespace rsmb::matops {
namespace {

// Phase of z as a unit complex number; 1 for z == 0.
cdouble unit_phase(cdouble z) {
  const double mag = std::abs(z);
  return mag == 0.0 ? cdouble{1.0, 0.0} : z / mag;
}

// Rotates v so its first entry above `floor` in magnitude is real positive.
void normalize_phase(ComplexVector& v, double floor) {
  for (const auto& z : v) {
    if (std::abs(z) > floor) {
      const cdouble rot = std::conj(unit_phase(z));
      for (auto& x : v) x *= rot;
      return;
    }
  }
}

}  // namespace

LqFactors lq_decompose(const ComplexMatrix& a) {
  const std::size_t k_rows = a.rows();
  const std::size_t n = a.cols();
  if (k_rows == 0 || k_rows > n) {
    throw Error(ErrorCode::invalid_argument, "lq_decompose requires 0 < rows <= cols");
  }
  if (!a.all_finite()) throw Error(ErrorCode::invalid_argument, "lq_decompose: non-finite input");

  // Right-multiplying by Householder reflectors H_0 ... H_{K-1} zeroes the
  // entries right of the diagonal row by row: A H_0 ... H_{K-1} = [L 0].
  ComplexMatrix work = a;
  std::vector<ComplexVector> reflectors;
  reflectors.reserve(k_rows);

  for (std::size_t k = 0; k < k_rows; ++k) {
    // u acts on columns k..n-1 and reflects y = conj(row_k[k:]) onto a multiple of e_1.
    ComplexVector u(n - k);
    for (std::size_t j = k; j < n; ++j) u[j - k] = std::conj(work(k, j));
    const double y_norm = std::sqrt(norm2(u));
    if (y_norm < kRankTolerance) {
      throw Error(ErrorCode::rank_deficient,
                  "diagonal entry " + std::to_string(k) + " of L vanishes");
    }
    u[0] += unit_phase(u[0]) * y_norm;
    const double u_norm2 = norm2(u);

    // work <- work * (I - 2 u u^H / u^H u), restricted to rows k.. and columns k..
    for (std::size_t r = k; r < k_rows; ++r) {
      cdouble proj = 0.0;
      for (std::size_t j = k; j < n; ++j) proj += work(r, j) * u[j - k];
      const cdouble scale = 2.0 * proj / u_norm2;
      for (std::size_t j = k; j < n; ++j) work(r, j) -= scale * std::conj(u[j - k]);
    }
    for (std::size_t j = k + 1; j < n; ++j) work(k, j) = 0.0;
    reflectors.push_back(std::move(u));
  }

  // Q = [I_K 0] H_{K-1} ... H_0.
  ComplexMatrix q(k_rows, n);
  for (std::size_t i = 0; i < k_rows; ++i) q(i, i) = 1.0;
  for (std::size_t kk = k_rows; kk-- > 0;) {
    const ComplexVector& u = reflectors[kk];
    const double u_norm2 = norm2(u);
    for (std::size_t r = 0; r < k_rows; ++r) {
      cdouble proj = 0.0;
      for (std::size_t j = kk; j < n; ++j) proj += q(r, j) * u[j - kk];
      const cdouble scale = 2.0 * proj / u_norm2;
      for (std::size_t j = kk; j < n; ++j) q(r, j) -= scale * std::conj(u[j - kk]);
    }
  }

  ComplexMatrix l(k_rows, k_rows);
  for (std::size_t i = 0; i < k_rows; ++i)
    for (std::size_t j = 0; j <= i; ++j) l(i, j) = work(i, j);

  // Positive real diagonal: scale column k of L by conj(phase), row k of Q by phase.
  for (std::size_t k = 0; k < k_rows; ++k) {
    const cdouble phase = unit_phase(l(k, k));
    for (std::size_t i = k; i < k_rows; ++i) l(i, k) *= std::conj(phase);
    for (std::size_t j = 0; j < n; ++j) q(k, j) *= phase;
    l(k, k) = std::abs(l(k, k));
    if (l(k, k).real() < kRankTolerance) {
      throw Error(ErrorCode::rank_deficient,
                  "diagonal entry " + std::to_string(k) + " of L vanishes");
    }
  }
  return {std::move(l), std::move(q)};
}

DominantDirection dominant_right_singular_direction(const ComplexMatrix& a,
                                                    PowerIterationOptions options) {
  const std::size_t n = a.cols();
  if (a.rows() == 0 || n == 0) throw Error(ErrorCode::invalid_argument, "empty matrix");
  const double fro = a.frobenius_norm();
  if (!(fro > 0.0)) throw Error(ErrorCode::invalid_argument, "matrix must be nonzero");

  const ComplexMatrix ah = a.adjoint();

  // Start from the column of A with the largest energy, pushed once through A^H A.
  std::size_t best = 0;
  double best_energy = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double energy = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) energy += std::norm(a(i, j));
    if (energy > best_energy) {
      best_energy = energy;
      best = j;
    }
  }
  ComplexVector v(n);
  v[best] = 1.0;

  constexpr double kPhaseFloor = 1e-10;
  DominantDirection out;
  for (int it = 1; it <= options.max_iterations; ++it) {
    ComplexVector next = ah * (a * v);
    const double len = std::sqrt(norm2(next));
    if (len == 0.0) {
      // Start vector in the null space; fall back to a uniform start.
      std::fill(next.begin(), next.end(), cdouble{1.0 / std::sqrt(double(n)), 0.0});
    } else {
      for (auto& z : next) z /= len;
    }
    normalize_phase(next, kPhaseFloor);

    double delta2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) delta2 += std::norm(next[j] - v[j]);
    v = std::move(next);
    out.iterations = it;
    if (std::sqrt(delta2) <= options.tol) {
      out.converged = true;
      break;
    }
  }
  out.sigma_max = std::sqrt(norm2(a * v));
  out.v = std::move(v);
  return out;
}

bool is_permutation(std::span<const std::size_t> perm, std::size_t n) noexcept {
  if (perm.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

Permutation inverse_permutation(std::span<const std::size_t> perm) {
  if (!is_permutation(perm, perm.size())) {
    throw Error(ErrorCode::invalid_permutation, "not a bijection");
  }
  Permutation inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

ComplexMatrix permute_rows(const ComplexMatrix& a, std::span<const std::size_t> perm) {
  if (!is_permutation(perm, a.rows())) {
    throw Error(ErrorCode::invalid_permutation,
                "permutation of length " + std::to_string(perm.size()) +
                    " is not a bijection on " + std::to_string(a.rows()) + " rows");
  }
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto src = a.row(perm[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

ComplexMatrix lower_triangular_inverse(const ComplexMatrix& l) {
  const std::size_t n = l.rows();
  if (l.cols() != n) throw Error(ErrorCode::shape_mismatch, "triangular inverse needs square");
  ComplexMatrix inv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    // Column c of the inverse solves L x = e_c; x_i = 0 for i < c.
    for (std::size_t i = c; i < n; ++i) {
      cdouble acc = (i == c) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
      for (std::size_t j = c; j < i; ++j) acc -= l(i, j) * inv(j, c);
      if (l(i, i) == cdouble{0.0, 0.0}) throw Error(ErrorCode::rank_deficient, "zero pivot");
      inv(i, c) = acc / l(i, i);
    }
  }
  return inv;
}

ComplexVector forward_substitute(const ComplexMatrix& l, std::span<const cdouble> b) {
  const std::size_t n = l.rows();
  if (l.cols() != n || b.size() != n) throw Error(ErrorCode::shape_mismatch, "forward substitution");
  ComplexVector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    cdouble acc = b[i];
    for (std::size_t j = 0; j < i; ++j) acc -= l(i, j) * x[j];
    if (l(i, i) == cdouble{0.0, 0.0}) throw Error(ErrorCode::rank_deficient, "zero pivot");
    x[i] = acc / l(i, i);
  }
  return x;
}

}  // namespace rsmb::matops
