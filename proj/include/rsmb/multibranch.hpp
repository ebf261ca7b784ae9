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
#include <span>
#include <vector>

#include "rsmb/branch_pattern.hpp"
#include "rsmb/complex_matrix.hpp"
#include "rsmb/rng.hpp"
#include "rsmb/rsrates.hpp"
#include "rsmb/thp.hpp"

namespace rsmb::branch {

struct SelectionOutcome {
  BranchPattern branch;
  double delta = 0.0;
  double objective = 0.0;
  rates::AsrReport report;
};

/// Best (branch, delta) over branches 1..l_branches and the grid, all on the
/// evaluator's shared error draws. Ties go to the smaller branch index, then
/// the smaller delta. Candidates without private power are skipped.
SelectionOutcome select_branch_es(rates::CandidateEvaluator& evaluator, std::size_t l_branches,
                                  std::span<const double> delta_grid);

/// Best branch at a fixed delta_f; ties go to the smaller branch index.
SelectionOutcome select_branch_fpa(rates::CandidateEvaluator& evaluator, double delta_f,
                                   std::size_t l_branches);

// Convenience forms that draw n_err error matrices from rng first.
SelectionOutcome select_branch_es(const ComplexMatrix& h_est, std::size_t l_branches,
                                  std::span<const double> delta_grid, std::size_t n_err,
                                  thp::Scheme scheme, double sigma_e2, double etr,
                                  double sigma_n2, Rng& rng);
SelectionOutcome select_branch_fpa(const ComplexMatrix& h_est, double delta_f,
                                   std::size_t l_branches, std::size_t n_err, thp::Scheme scheme,
                                   double sigma_e2, double etr, double sigma_n2, Rng& rng);

/// Ensemble-level ESR pieces: common = min_k mean_t rc_bar[t][k],
/// private = mean_t rp_bar[t].
struct EnsembleRate {
  double common_part = 0.0;
  double private_part = 0.0;
  double esr() const { return common_part + private_part; }
};
EnsembleRate ensemble_rate(std::span<const rates::AsrReport> reports);

struct CalibrationResult {
  double delta_f = 0.0;
  std::size_t fixed_branch = 1;  // meaningful for the fixed-branch criterion
  std::size_t n_cal = 0;
};

/// delta maximizing the branch-1 ensemble ESR over the calibration evaluators.
CalibrationResult calibrate_delta_f(std::span<rates::CandidateEvaluator> ensemble,
                                    std::span<const double> delta_grid);

/// Branch maximizing the ensemble ESR at the branch-1 delta_f, followed by a
/// re-optimization of delta for that branch. Ties go to the smaller index.
CalibrationResult select_branch_fb(std::span<rates::CandidateEvaluator> ensemble,
                                   std::size_t l_branches, std::span<const double> delta_grid);

}  // namespace rsmb::branch
