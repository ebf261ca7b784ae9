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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rsmb {

using cdouble = std::complex<double>;
using ComplexVector = std::vector<cdouble>;

/// Dense row-major complex matrix. Holds channel rows (one user per row),
/// precoding filters and the small triangular factors derived from them.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> data);
  ComplexMatrix(std::initializer_list<std::initializer_list<cdouble>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cdouble> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  cdouble& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const cdouble& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<cdouble> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const cdouble> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  ComplexVector column(std::size_t c) const;

  cdouble* data() noexcept { return data_.data(); }
  const cdouble* data() const noexcept { return data_.data(); }
  std::span<const cdouble> values() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  double frobenius_norm() const;
  bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cdouble scale) noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cdouble> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cdouble scale);
// Product through the active kernel table.
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& a, std::span<const cdouble> x);

double norm2(std::span<const cdouble> x);  // squared Euclidean norm
cdouble dot(std::span<const cdouble> row, std::span<const cdouble> x);  // unconjugated sum row[i]*x[i]

}  // namespace rsmb
