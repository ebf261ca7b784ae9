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

#include "rsmb/rsrates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rsmb/channel.hpp"
#include "rsmb/error.hpp"
#include "rsmb/kernels.hpp"
#include "rsmb/matops.hpp"

namespace rsmb::rates {

RsPowerSplit common_precoder(std::span<const cdouble> unit_direction, double delta, double etr,
                             double sigma_n2) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "delta must lie in [0, 1)");
  }
  RsPowerSplit split{delta, etr, sigma_n2, ComplexVector(unit_direction.size())};
  if (delta == 0.0) return split;
  const double amplitude = std::sqrt(delta * etr);
  for (std::size_t i = 0; i < unit_direction.size(); ++i) split.p_c[i] = amplitude * unit_direction[i];
  return split;
}

RsPowerSplit common_precoder(const ComplexMatrix& h_est_permuted, double delta, double etr,
                             double sigma_n2) {
  if (delta == 0.0) {
    return RsPowerSplit{0.0, etr, sigma_n2, ComplexVector(h_est_permuted.cols())};
  }
  const auto dir = matops::dominant_right_singular_direction(h_est_permuted);
  return common_precoder(dir.v, delta, etr, sigma_n2);
}

InterferenceTerms interference_terms(const thp::ThpFilterSet& filters,
                                     const ComplexMatrix& h_err_permuted) {
  const std::size_t k = filters.users();
  if (h_err_permuted.rows() != k || h_err_permuted.cols() != filters.W.rows()) {
    throw Error(ErrorCode::shape_mismatch, "error matrix does not match the filters");
  }
  InterferenceTerms out{ComplexVector(k), std::vector<double>(k)};
  kernels::active().interference(h_err_permuted.data(), filters.W.data(), k,
                                 h_err_permuted.cols(), out.desired.data(), out.leakage.data());
  return out;
}

double common_sinr(thp::Scheme scheme, double lhat_kk, double beta2, double numerator,
                   cdouble desired, double leakage, double sigma_n2) {
  const cdouble own = (scheme == thp::Scheme::decentralized ? lhat_kk : 1.0) + desired;
  return numerator / (beta2 * (std::norm(own) + leakage) + sigma_n2);
}

double private_sinr(thp::Scheme scheme, double lhat_kk, double inverse_lhat2_sum,
                    std::size_t users, double private_power, double leakage, double sigma_n2) {
  if (!(private_power > 0.0)) {
    throw Error(ErrorCode::no_private_power, "no power left for the private streams");
  }
  if (scheme == thp::Scheme::decentralized) {
    const double l2 = lhat_kk * lhat_kk;
    return 1.0 / (leakage / l2 + static_cast<double>(users) * sigma_n2 / (private_power * l2));
  }
  return 1.0 / (leakage + sigma_n2 * inverse_lhat2_sum / private_power);
}

namespace {

void check_shapes(const thp::ThpFilterSet& filters, const RsPowerSplit& split,
                  const ComplexMatrix& h_est, const ComplexMatrix& h_err) {
  const std::size_t k = filters.users();
  const std::size_t nt = filters.F.rows();
  if (h_est.rows() != k || h_est.cols() != nt || h_err.rows() != k || h_err.cols() != nt ||
      split.p_c.size() != nt) {
    throw Error(ErrorCode::shape_mismatch, "SINR inputs disagree in shape");
  }
}

}  // namespace

std::vector<double> sinr_common(const thp::ThpFilterSet& filters, const RsPowerSplit& split,
                                const ComplexMatrix& h_est_permuted,
                                const ComplexMatrix& h_err_permuted) {
  check_shapes(filters, split, h_est_permuted, h_err_permuted);
  if (!filters.beta) throw Error(ErrorCode::invalid_argument, "filters.beta is not set");
  const double beta2 = *filters.beta * *filters.beta;
  const auto terms = interference_terms(filters, h_err_permuted);
  const ComplexVector received = h_est_permuted * std::span<const cdouble>(split.p_c);
  std::vector<double> out(filters.users());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = common_sinr(filters.scheme, filters.lhat(k), beta2, std::norm(received[k]),
                         terms.desired[k], terms.leakage[k], split.sigma_n2);
  }
  return out;
}

std::vector<double> sinr_private(const thp::ThpFilterSet& filters, const RsPowerSplit& split,
                                 const ComplexMatrix& h_est_permuted,
                                 const ComplexMatrix& h_err_permuted) {
  check_shapes(filters, split, h_est_permuted, h_err_permuted);
  const auto terms = interference_terms(filters, h_err_permuted);
  const double inv_sum = filters.inverse_lhat2_sum();
  std::vector<double> out(filters.users());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = private_sinr(filters.scheme, filters.lhat(k), inv_sum, filters.users(),
                          split.private_power(), terms.leakage[k], split.sigma_n2);
  }
  return out;
}

InstantaneousRates instantaneous_rates(const SinrReport& report) {
  InstantaneousRates out;
  out.common.reserve(report.common.size());
  out.private_.reserve(report.private_.size());
  for (double g : report.common) out.common.push_back(std::log2(1.0 + g));
  for (double g : report.private_) out.private_.push_back(std::log2(1.0 + g));
  return out;
}

double asr_objective(std::span<const double> rc_bar, double rp_bar) {
  if (rc_bar.empty()) return rp_bar;
  return *std::min_element(rc_bar.begin(), rc_bar.end()) + rp_bar;
}

CandidateEvaluator::CandidateEvaluator(ComplexMatrix h_est, std::vector<ComplexMatrix> errors,
                                       thp::Scheme scheme, double etr, double sigma_n2)
    : h_est_(std::move(h_est)),
      errors_(std::move(errors)),
      scheme_(scheme),
      etr_(etr),
      sigma_n2_(sigma_n2),
      caches_(h_est_.rows()) {
  if (errors_.empty()) throw Error(ErrorCode::invalid_argument, "at least one error draw required");
  for (const auto& e : errors_) {
    if (e.rows() != h_est_.rows() || e.cols() != h_est_.cols())
      throw Error(ErrorCode::shape_mismatch, "error draw shape differs from the estimate");
  }
  if (!(etr_ > 0.0)) throw Error(ErrorCode::invalid_argument, "Etr must be > 0");
  // Row permutations leave the right-singular vectors unchanged, so one
  // direction serves every branch.
  auto dir = matops::dominant_right_singular_direction(h_est_);
  direction_ = std::move(dir.v);
  direction_converged_ = dir.converged;
}

CandidateEvaluator::BranchCache& CandidateEvaluator::cache_for(const branch::BranchPattern& branch) {
  if (branch.index < 1 || branch.index > caches_.size() || branch.perm.size() != users()) {
    throw Error(ErrorCode::index_out_of_range,
                "branch " + std::to_string(branch.index) + " does not fit " +
                    std::to_string(users()) + " users");
  }
  auto& slot = caches_[branch.index - 1];
  if (slot) return *slot;

  const ComplexMatrix h_perm = matops::permute_rows(h_est_, branch.perm);
  BranchCache cache{thp::build_thp_filters(h_perm, scheme_), {}, {}};
  const ComplexVector projected = h_perm * std::span<const cdouble>(direction_);
  cache.direction_gain2.reserve(projected.size());
  for (const auto& z : projected) cache.direction_gain2.push_back(std::norm(z));
  cache.terms.reserve(errors_.size());
  for (const auto& e : errors_) {
    cache.terms.push_back(interference_terms(cache.filters, matops::permute_rows(e, branch.perm)));
  }
  slot.emplace(std::move(cache));
  return *slot;
}

const thp::ThpFilterSet& CandidateEvaluator::filters(const branch::BranchPattern& branch) {
  return cache_for(branch).filters;
}

AsrReport CandidateEvaluator::evaluate(const branch::BranchPattern& branch, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "delta must lie in [0, 1)");
  }
  BranchCache& cache = cache_for(branch);
  const auto& f = cache.filters;
  const std::size_t k_users = users();
  const double pc_norm2 = delta * etr_;
  const double private_power = etr_ - pc_norm2;
  const double inv_sum = f.inverse_lhat2_sum();
  const double beta = thp::compute_beta(scheme_, k_users, inv_sum, etr_, pc_norm2);
  const double beta2 = beta * beta;

  AsrReport report;
  report.rc_bar.assign(k_users, 0.0);
  for (const auto& terms : cache.terms) {
    for (std::size_t k = 0; k < k_users; ++k) {
      const double numerator = pc_norm2 * cache.direction_gain2[k];
      const double gc = common_sinr(scheme_, f.lhat(k), beta2, numerator, terms.desired[k],
                                    terms.leakage[k], sigma_n2_);
      const double gp = private_sinr(scheme_, f.lhat(k), inv_sum, k_users, private_power,
                                     terms.leakage[k], sigma_n2_);
      report.rc_bar[k] += std::log2(1.0 + gc);
      report.rp_bar += std::log2(1.0 + gp);
    }
  }
  const double n = static_cast<double>(cache.terms.size());
  for (auto& r : report.rc_bar) r /= n;
  report.rp_bar /= n;
  report.n_err_samples = cache.terms.size();
  report.objective = asr_objective(report.rc_bar, report.rp_bar);
  return report;
}

std::optional<AsrReport> CandidateEvaluator::try_evaluate(const branch::BranchPattern& branch,
                                                          double delta) {
  try {
    return evaluate(branch, delta);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::no_private_power) return std::nullopt;
    throw;
  }
}

AsrReport average_rates(const ComplexMatrix& h_est, const branch::BranchPattern& branch,
                        double delta, std::size_t n_err, double sigma_e2, thp::Scheme scheme,
                        double etr, double sigma_n2, Rng& rng) {
  if (n_err < 1) throw Error(ErrorCode::invalid_argument, "n_err must be >= 1");
  std::vector<ComplexMatrix> errors;
  errors.reserve(n_err);
  for (std::size_t i = 0; i < n_err; ++i) {
    errors.push_back(channel::draw_error(h_est.rows(), h_est.cols(), sigma_e2, rng));
  }
  CandidateEvaluator evaluator(h_est, std::move(errors), scheme, etr, sigma_n2);
  return evaluator.evaluate(branch, delta);
}

std::pair<double, double> optimize_delta(
    const std::function<std::optional<double>(double)>& evaluator, std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::invalid_argument, "empty delta grid");
  std::optional<std::pair<double, double>> best;
  for (double delta : grid) {
    const auto value = evaluator(delta);
    if (!value) continue;
    if (!best || *value > best->second || (*value == best->second && delta < best->first)) {
      best = {delta, *value};
    }
  }
  if (!best) throw Error(ErrorCode::invalid_argument, "no feasible delta on the grid");
  return *best;
}

std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(i * 0.05);
  return grid;
}

}  // namespace rsmb::rates
