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

#include "rsmb/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "rsmb/error.hpp"
#include "rsmb/format.hpp"
#include "rsmb/matops.hpp"

namespace rsmb::oracle {
namespace {

// Column-by-column B^-1 through forward substitution, independent of W.
ComplexMatrix unit_lower_inverse(const ComplexMatrix& b) {
  const std::size_t k = b.rows();
  ComplexMatrix inv(k, k);
  for (std::size_t c = 0; c < k; ++c) {
    ComplexVector e(k);
    e[c] = 1.0;
    const ComplexVector x = matops::forward_substitute(b, e);
    for (std::size_t r = 0; r < k; ++r) inv(r, c) = x[r];
  }
  return inv;
}

double relative_deviation(double closed, double model) {
  if (closed == model) return 0.0;
  return std::abs(closed - model) / std::abs(model);
}

}  // namespace

EffectiveGains effective_gain_matrix(const channel::ChannelRealization& realization,
                                     const thp::ThpFilterSet& filters,
                                     const rates::RsPowerSplit& split,
                                     const branch::BranchPattern& branch,
                                     CommonNumerator numerator) {
  if (!filters.beta) throw Error(ErrorCode::invalid_argument, "filters.beta is not set");
  const std::size_t k = filters.users();
  const ComplexMatrix h_true = matops::permute_rows(realization.h_true, branch.perm);
  const ComplexMatrix h_est = matops::permute_rows(realization.h_est, branch.perm);

  ComplexMatrix chain = h_true * filters.F;  // K x K
  if (filters.scheme == thp::Scheme::centralized) {
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) chain(r, c) *= filters.g[c];
  }
  ComplexMatrix gains = chain * unit_lower_inverse(filters.B);
  EffectiveGains out;
  out.receiver_scaling.assign(k, 1.0);
  if (filters.scheme == thp::Scheme::decentralized) out.receiver_scaling = filters.g;
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) gains(r, c) *= *filters.beta * out.receiver_scaling[r];
  out.private_gain_matrix = std::move(gains);

  const ComplexMatrix& h_common =
      numerator == CommonNumerator::true_channel ? h_true : h_est;
  out.common_gain = h_common * std::span<const cdouble>(split.p_c);
  return out;
}

rates::SinrReport model_sinr(const EffectiveGains& gains, double sigma_n2,
                             std::span<const double> receiver_scaling) {
  const std::size_t k = gains.private_gain_matrix.rows();
  if (gains.private_gain_matrix.cols() != k || gains.common_gain.size() != k ||
      receiver_scaling.size() != k) {
    throw Error(ErrorCode::shape_mismatch, "model_sinr inputs disagree in shape");
  }
  rates::SinrReport out{std::vector<double>(k), std::vector<double>(k)};
  for (std::size_t r = 0; r < k; ++r) {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += std::norm(gains.private_gain_matrix(r, i));
    const double own = std::norm(gains.private_gain_matrix(r, r));
    const double noise = receiver_scaling[r] * receiver_scaling[r] * sigma_n2;
    const double common_power = std::norm(receiver_scaling[r] * gains.common_gain[r]);
    out.common[r] = common_power / (total + noise);
    out.private_[r] = own / (total - own + noise);
  }
  return out;
}

DeviationReport compare_closed_form(const channel::ChannelRealization& realization,
                                    thp::Scheme scheme, double delta,
                                    const branch::BranchPattern& branch, double etr,
                                    double sigma_n2) {
  const ComplexMatrix h_est = matops::permute_rows(realization.h_est, branch.perm);
  const ComplexMatrix h_err = matops::permute_rows(realization.h_err, branch.perm);
  thp::ThpFilterSet filters = thp::build_thp_filters(h_est, scheme);
  const rates::RsPowerSplit split = rates::common_precoder(h_est, delta, etr, sigma_n2);
  filters.beta = thp::compute_beta(filters, etr, split.pc_norm2());

  DeviationReport rep;
  rep.closed_form.common = rates::sinr_common(filters, split, h_est, h_err);
  rep.closed_form.private_ = rates::sinr_private(filters, split, h_est, h_err);

  const EffectiveGains gains = effective_gain_matrix(realization, filters, split, branch);
  rep.model = model_sinr(gains, sigma_n2, gains.receiver_scaling);
  const ComplexVector est_common = h_est * std::span<const cdouble>(split.p_c);

  const std::size_t k = filters.users();
  for (std::size_t i = 0; i < k; ++i) {
    rep.common_rel_dev.push_back(relative_deviation(rep.closed_form.common[i], rep.model.common[i]));
    rep.private_rel_dev.push_back(
        relative_deviation(rep.closed_form.private_[i], rep.model.private_[i]));
    const double est_power = std::norm(est_common[i]);
    rep.numerator_gap.push_back(est_power == 0.0 ? 0.0
                                                 : std::norm(gains.common_gain[i]) / est_power - 1.0);
    rep.max_common = std::max(rep.max_common, rep.common_rel_dev.back());
    rep.max_private = std::max(rep.max_private, rep.private_rel_dev.back());
  }
  return rep;
}

std::vector<ValidationRow> deviation_sweep(const ValidationSettings& s) {
  const auto branch = branch::pattern(s.branch_index, s.users);
  std::vector<ValidationRow> rows;
  rows.reserve(s.sigma_e2_list.size() * s.instances * s.users);
  for (double sigma_e2 : s.sigma_e2_list) {
    for (std::size_t inst = 0; inst < s.instances; ++inst) {
      Rng rng = derive_stream(s.seed, inst, StreamPurpose::validation);
      ComplexMatrix h_est = channel::draw_estimate(s.users, s.antennas, rng);
      ComplexMatrix h_err = channel::draw_error(s.users, s.antennas, sigma_e2, rng);
      const auto realization = channel::compose_true(std::move(h_est), std::move(h_err), sigma_e2);
      const auto rep = compare_closed_form(realization, s.scheme, s.delta, branch, s.etr, s.sigma_n2);
      for (std::size_t k = 0; k < s.users; ++k) {
        rows.push_back({sigma_e2, inst, k, rep.common_rel_dev[k], rep.private_rel_dev[k],
                        rep.numerator_gap[k]});
      }
    }
  }
  return rows;
}

void write_deviation_csv(std::span<const ValidationRow> rows, thp::Scheme scheme,
                         std::ostream& out) {
  out << "scheme,sigma_e2,instance,user,common_rel_dev,private_rel_dev,common_numerator_gap\n";
  const char* name = scheme == thp::Scheme::decentralized ? "dthp" : "cthp";
  for (const auto& r : rows) {
    out << name << ',' << format_double(r.sigma_e2) << ',' << r.instance << ',' << r.user + 1
        << ',' << format_double(r.common_rel_dev) << ',' << format_double(r.private_rel_dev)
        << ',' << format_double(r.numerator_gap) << '\n';
  }
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace rsmb::oracle
