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

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rsmb::testing {

cdouble cn(Gen& gen, double variance) {
  std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
  const double re = n(gen);
  const double im = n(gen);
  return {re, im};
}

ComplexMatrix random_matrix(Gen& gen, std::size_t rows, std::size_t cols, double variance) {
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = cn(gen, variance);
  return m;
}

ComplexVector random_vector(Gen& gen, std::size_t n, double variance) {
  ComplexVector v(n);
  for (auto& x : v) x = cn(gen, variance);
  return v;
}

ComplexVector random_unit_vector(Gen& gen, std::size_t n) {
  auto v = random_vector(gen, n);
  double s = 0;
  for (auto x : v) s += std::norm(x);
  for (auto& x : v) x /= std::sqrt(s);
  return v;
}

ComplexMatrix random_unit_lower(Gen& gen, std::size_t n, double variance) {
  ComplexMatrix b(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    b(r, r) = 1.0;
    for (std::size_t c = 0; c < r; ++c) b(r, c) = cn(gen, variance);
  }
  return b;
}

ComplexVector random_qpsk(Gen& gen, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  const double a = 1.0 / std::sqrt(2.0);
  ComplexVector s(n);
  for (auto& x : s) {
    const bool re = coin(gen);
    const bool im = coin(gen);
    x = {re ? a : -a, im ? a : -a};
  }
  return s;
}

ComplexMatrix naive_multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cdouble acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

GramSchmidtLq gram_schmidt_lq(const ComplexMatrix& a) {
  const std::size_t k = a.rows(), n = a.cols();
  GramSchmidtLq out{ComplexMatrix(k, k), ComplexMatrix(k, n)};
  for (std::size_t i = 0; i < k; ++i) {
    ComplexVector r(a.row(i).begin(), a.row(i).end());
    // Two passes keep the rows orthonormal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        cdouble proj = 0;
        for (std::size_t c = 0; c < n; ++c) proj += r[c] * std::conj(out.Q(j, c));
        for (std::size_t c = 0; c < n; ++c) r[c] -= proj * out.Q(j, c);
        out.L(i, j) += proj;
      }
    }
    double nrm = 0;
    for (auto x : r) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    if (nrm == 0) throw std::runtime_error("gram_schmidt_lq: dependent rows");
    out.L(i, i) = nrm;
    for (std::size_t c = 0; c < n; ++c) out.Q(i, c) = r[c] / nrm;
  }
  return out;
}

HermitianEigen jacobi_eigen(const ComplexMatrix& hermitian) {
  const std::size_t n = hermitian.rows();
  ComplexMatrix a = hermitian;
  ComplexMatrix v = ComplexMatrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cdouble apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        // Rotate in the (p,q) plane so that a(p,q) vanishes.
        const cdouble phase = apq / mag;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
        const double c = std::cos(theta), s = std::sin(theta);
        // Columns: new_p = c*col_p - s*conj(phase)*col_q, new_q = s*phase*col_p + c*col_q
        for (std::size_t r = 0; r < n; ++r) {
          const cdouble xp = a(r, p), xq = a(r, q);
          a(r, p) = c * xp - s * std::conj(phase) * xq;
          a(r, q) = s * phase * xp + c * xq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const cdouble xp = a(p, r), xq = a(q, r);
          a(p, r) = c * xp - s * phase * xq;
          a(q, r) = s * std::conj(phase) * xp + c * xq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const cdouble xp = v(r, p), xq = v(r, q);
          v(r, p) = c * xp - s * std::conj(phase) * xq;
          v(r, q) = s * phase * xp + c * xq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = v(r, order[j]);
  }
  return out;
}

TopSingular top_singular(const ComplexMatrix& a) {
  const auto gram = naive_multiply(a.adjoint(), a);
  const auto eig = jacobi_eigen(gram);
  TopSingular out;
  out.sigma = std::sqrt(std::max(0.0, eig.values[0]));
  out.v = eig.vectors.column(0);
  return out;
}

double alignment(const ComplexVector& a, const ComplexVector& b) {
  cdouble s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return std::abs(s);
}

double relative_error(double value, double reference) {
  if (reference == 0) return std::abs(value);
  return std::abs(value - reference) / std::abs(reference);
}

}  // namespace rsmb::testing
