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
#include <vector>

#include "rsmb/complex_matrix.hpp"
#include "rsmb/rng.hpp"

namespace rsmb::channel {

enum class ErrorMode { scaling, fixed };

/// CSIT error power model: either a * Etr^-alpha or a fixed value.
struct ErrorModel {
  ErrorMode mode = ErrorMode::scaling;
  double a = 0.95;
  double alpha = 0.6;
  double sigma_e2_fixed = 0.0;

  static ErrorModel scaling(double a, double alpha);
  static ErrorModel fixed(double sigma_e2);

  // Throws Error(invalid_argument) when a <= 0, alpha < 0 or sigma_e2_fixed < 0.
  void validate() const;

  friend bool operator==(const ErrorModel&, const ErrorModel&) = default;
};

double error_variance(const ErrorModel& model, double etr);

/// K x Nt matrix of i.i.d. CN(0, 1) entries.
ComplexMatrix draw_estimate(std::size_t k, std::size_t nt, Rng& rng);

/// K x Nt matrix of i.i.d. CN(0, sigma_e2 / Nt) entries, so every row has
/// expected squared norm sigma_e2. Consumes the same number of variates for
/// any sigma_e2, including zero.
ComplexMatrix draw_error(std::size_t k, std::size_t nt, double sigma_e2, Rng& rng);

struct ChannelRealization {
  ComplexMatrix h_est;  // known at the transmitter
  ComplexMatrix h_err;
  ComplexMatrix h_true;
  std::vector<double> sigma_e2;  // per user
};

/// h_true = h_est + h_err. Throws Error(shape_mismatch).
ChannelRealization compose_true(ComplexMatrix h_est, ComplexMatrix h_err, double sigma_e2 = 0.0);

}  // namespace rsmb::channel
