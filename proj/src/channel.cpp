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

#include "rsmb/channel.hpp"

#include <cmath>

#include "rsmb/error.hpp"

namespace rsmb::channel {
namespace {

ComplexMatrix draw_gaussian(std::size_t k, std::size_t nt, double variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(variance / 2.0);
  ComplexMatrix m(k, nt);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = {scale * re, scale * im};
    }
  }
  return m;
}

}  // namespace

ErrorModel ErrorModel::scaling(double a, double alpha) {
  ErrorModel m;
  m.mode = ErrorMode::scaling;
  m.a = a;
  m.alpha = alpha;
  return m;
}

ErrorModel ErrorModel::fixed(double sigma_e2) {
  ErrorModel m;
  m.mode = ErrorMode::fixed;
  m.sigma_e2_fixed = sigma_e2;
  return m;
}

void ErrorModel::validate() const {
  if (!(a > 0.0)) throw Error(ErrorCode::invalid_argument, "error model: a must be > 0");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::invalid_argument, "error model: alpha must be >= 0");
  if (!(sigma_e2_fixed >= 0.0))
    throw Error(ErrorCode::invalid_argument, "error model: sigma_e2 must be >= 0");
}

double error_variance(const ErrorModel& model, double etr) {
  if (!(etr > 0.0)) throw Error(ErrorCode::invalid_argument, "Etr must be > 0");
  if (model.mode == ErrorMode::fixed) return model.sigma_e2_fixed;
  return model.a * std::pow(etr, -model.alpha);
}

ComplexMatrix draw_estimate(std::size_t k, std::size_t nt, Rng& rng) {
  return draw_gaussian(k, nt, 1.0, rng);
}

ComplexMatrix draw_error(std::size_t k, std::size_t nt, double sigma_e2, Rng& rng) {
  if (!(sigma_e2 >= 0.0)) throw Error(ErrorCode::invalid_argument, "sigma_e2 must be >= 0");
  if (nt == 0) throw Error(ErrorCode::invalid_argument, "Nt must be > 0");
  return draw_gaussian(k, nt, sigma_e2 / static_cast<double>(nt), rng);
}

ChannelRealization compose_true(ComplexMatrix h_est, ComplexMatrix h_err, double sigma_e2) {
  if (h_est.rows() != h_err.rows() || h_est.cols() != h_err.cols()) {
    throw Error(ErrorCode::shape_mismatch, "estimate and error shapes differ");
  }
  ComplexMatrix h_true = h_est + h_err;
  std::vector<double> per_user(h_est.rows(), sigma_e2);
  return {std::move(h_est), std::move(h_err), std::move(h_true), std::move(per_user)};
}

}  // namespace rsmb::channel
