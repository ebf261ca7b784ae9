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
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rsmb/branch_pattern.hpp"
#include "rsmb/complex_matrix.hpp"
#include "rsmb/rng.hpp"
#include "rsmb/thp.hpp"

namespace rsmb::rates {

/// Power split between the common stream and the private streams.
/// ||p_c||^2 = delta * Etr; the private streams share (1 - delta) Etr.
struct RsPowerSplit {
  double delta = 0.0;
  double etr = 1.0;
  double sigma_n2 = 1.0;
  ComplexVector p_c;

  double pc_norm2() const { return delta * etr; }
  double private_power() const { return etr - pc_norm2(); }
};

/// p_c = sqrt(delta Etr) v1, v1 the top right-singular direction of the
/// estimate. delta = 0 yields the zero vector without touching the estimate.
/// Slow power-iteration convergence falls back to the last iterate.
RsPowerSplit common_precoder(const ComplexMatrix& h_est_permuted, double delta, double etr,
                             double sigma_n2 = 1.0);
RsPowerSplit common_precoder(std::span<const cdouble> unit_direction, double delta, double etr,
                             double sigma_n2 = 1.0);

struct SinrReport {
  std::vector<double> common;
  std::vector<double> private_;
};

/// Error projections onto the composite private columns, per user k:
/// desired = h~_k^T w_k, leakage = sum_{i != k} |h~_k^T w_i|^2.
struct InterferenceTerms {
  ComplexVector desired;
  std::vector<double> leakage;
};

InterferenceTerms interference_terms(const thp::ThpFilterSet& filters,
                                     const ComplexMatrix& h_err_permuted);

/// Closed-form common-stream SINR of user k.
///   dec.: |h^_k p_c|^2 / (beta^2 (|l_kk + desired|^2 + leakage) + sigma_n^2)
///   cen.: |h^_k p_c|^2 / (beta^2 (|1 + desired|^2 + leakage) + sigma_n^2)
double common_sinr(thp::Scheme scheme, double lhat_kk, double beta2, double numerator,
                   cdouble desired, double leakage, double sigma_n2);

/// Closed-form private SINR of user k after ideal common-stream SIC.
///   dec.: 1 / (leakage / l_kk^2 + K sigma_n^2 / (P l_kk^2))
///   cen.: 1 / (leakage + sigma_n^2 sum_j l_jj^-2 / P)
/// with P = Etr - ||p_c||^2 > 0.
double private_sinr(thp::Scheme scheme, double lhat_kk, double inverse_lhat2_sum,
                    std::size_t users, double private_power, double leakage, double sigma_n2);

/// Requires filters.beta (see thp::compute_beta with split.pc_norm2()).
std::vector<double> sinr_common(const thp::ThpFilterSet& filters, const RsPowerSplit& split,
                                const ComplexMatrix& h_est_permuted,
                                const ComplexMatrix& h_err_permuted);

/// Throws Error(no_private_power) when the split leaves nothing for the private streams.
std::vector<double> sinr_private(const thp::ThpFilterSet& filters, const RsPowerSplit& split,
                                 const ComplexMatrix& h_est_permuted,
                                 const ComplexMatrix& h_err_permuted);

struct InstantaneousRates {
  std::vector<double> common;   // R_c,k
  std::vector<double> private_; // R_k
};

/// log2(1 + gamma), elementwise.
InstantaneousRates instantaneous_rates(const SinrReport& report);

/// Rates averaged over CSIT error draws for one estimate, branch and delta.
struct AsrReport {
  std::vector<double> rc_bar;  // per-user average common rate, bits/s/Hz
  double rp_bar = 0.0;         // average private sum rate
  double objective = 0.0;      // min_k rc_bar[k] + rp_bar
  std::size_t n_err_samples = 0;
};

double asr_objective(std::span<const double> rc_bar, double rp_bar);

/// Evaluates AsrReports for one channel estimate over a fixed set of error
/// draws (common random numbers): every (branch, delta) candidate sees the
/// same errors. Filters, the common direction and the error projections are
/// computed once per branch; each delta only rescales them.
class CandidateEvaluator {
 public:
  CandidateEvaluator(ComplexMatrix h_est, std::vector<ComplexMatrix> errors, thp::Scheme scheme,
                     double etr, double sigma_n2);

  std::size_t users() const noexcept { return h_est_.rows(); }
  thp::Scheme scheme() const noexcept { return scheme_; }
  double etr() const noexcept { return etr_; }
  double sigma_n2() const noexcept { return sigma_n2_; }
  std::size_t error_draws() const noexcept { return errors_.size(); }
  const ComplexMatrix& estimate() const noexcept { return h_est_; }
  bool direction_converged() const noexcept { return direction_converged_; }

  /// Throws Error(no_private_power) when delta leaves no private budget and
  /// propagates Error(rank_deficient) from the filter construction.
  AsrReport evaluate(const branch::BranchPattern& branch, double delta);

  /// nullopt instead of throwing no_private_power.
  std::optional<AsrReport> try_evaluate(const branch::BranchPattern& branch, double delta);

  const thp::ThpFilterSet& filters(const branch::BranchPattern& branch);

 private:
  struct BranchCache {
    thp::ThpFilterSet filters;
    std::vector<double> direction_gain2;  // |h^_k v1|^2, permuted order
    std::vector<InterferenceTerms> terms;  // one per error draw
  };
  BranchCache& cache_for(const branch::BranchPattern& branch);

  ComplexMatrix h_est_;
  std::vector<ComplexMatrix> errors_;
  thp::Scheme scheme_;
  double etr_;
  double sigma_n2_;
  ComplexVector direction_;
  bool direction_converged_ = true;
  std::vector<std::optional<BranchCache>> caches_;  // indexed by branch index - 1
};

/// Draws n_err error matrices from rng and averages the closed-form rates.
AsrReport average_rates(const ComplexMatrix& h_est, const branch::BranchPattern& branch,
                        double delta, std::size_t n_err, double sigma_e2, thp::Scheme scheme,
                        double etr, double sigma_n2, Rng& rng);

/// Grid point with the largest objective; ties resolve to the earliest grid
/// entry with the smallest delta. Points for which the evaluator returns
/// nullopt are skipped. Throws Error(invalid_argument) on an empty grid or a
/// grid with no feasible point.
std::pair<double, double> optimize_delta(const std::function<std::optional<double>(double)>& evaluator,
                                         std::span<const double> grid);

/// Default delta grid {0, 0.05, ..., 0.95}.
std::vector<double> default_delta_grid();

}  // namespace rsmb::rates
