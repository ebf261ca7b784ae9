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

#include "rsmb/multibranch.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "rsmb/channel.hpp"
#include "rsmb/error.hpp"

namespace rsmb::branch {
namespace {

std::vector<ComplexMatrix> draw_errors(const ComplexMatrix& h_est, std::size_t n_err,
                                       double sigma_e2, Rng& rng) {
  if (n_err < 1) throw Error(ErrorCode::invalid_argument, "n_err must be >= 1");
  std::vector<ComplexMatrix> errors;
  errors.reserve(n_err);
  for (std::size_t i = 0; i < n_err; ++i)
    errors.push_back(channel::draw_error(h_est.rows(), h_est.cols(), sigma_e2, rng));
  return errors;
}

// Ensemble ESR for one (branch, delta); nullopt when any member lacks private power.
std::optional<double> ensemble_esr(std::span<rates::CandidateEvaluator> ensemble,
                                   const BranchPattern& branch, double delta) {
  std::vector<rates::AsrReport> reports;
  reports.reserve(ensemble.size());
  for (auto& ev : ensemble) {
    auto r = ev.try_evaluate(branch, delta);
    if (!r) return std::nullopt;
    reports.push_back(std::move(*r));
  }
  return ensemble_rate(reports).esr();
}

}  // namespace

SelectionOutcome select_branch_es(rates::CandidateEvaluator& evaluator, std::size_t l_branches,
                                  std::span<const double> delta_grid) {
  if (delta_grid.empty()) throw Error(ErrorCode::invalid_argument, "empty delta grid");
  std::optional<SelectionOutcome> best;
  for (const auto& branch : patterns(l_branches, evaluator.users())) {
    for (double delta : delta_grid) {
      auto report = evaluator.try_evaluate(branch, delta);
      if (!report) continue;
      const double obj = report->objective;
      const bool better = !best || obj > best->objective ||
                          (obj == best->objective && branch.index == best->branch.index &&
                           delta < best->delta);
      if (better) best = SelectionOutcome{branch, delta, obj, std::move(*report)};
    }
  }
  if (!best) throw Error(ErrorCode::no_private_power, "no feasible (branch, delta) candidate");
  return std::move(*best);
}

SelectionOutcome select_branch_fpa(rates::CandidateEvaluator& evaluator, double delta_f,
                                   std::size_t l_branches) {
  const double grid[] = {delta_f};
  return select_branch_es(evaluator, l_branches, grid);
}

SelectionOutcome select_branch_es(const ComplexMatrix& h_est, std::size_t l_branches,
                                  std::span<const double> delta_grid, std::size_t n_err,
                                  thp::Scheme scheme, double sigma_e2, double etr,
                                  double sigma_n2, Rng& rng) {
  rates::CandidateEvaluator ev(h_est, draw_errors(h_est, n_err, sigma_e2, rng), scheme, etr,
                               sigma_n2);
  return select_branch_es(ev, l_branches, delta_grid);
}

SelectionOutcome select_branch_fpa(const ComplexMatrix& h_est, double delta_f,
                                   std::size_t l_branches, std::size_t n_err, thp::Scheme scheme,
                                   double sigma_e2, double etr, double sigma_n2, Rng& rng) {
  rates::CandidateEvaluator ev(h_est, draw_errors(h_est, n_err, sigma_e2, rng), scheme, etr,
                               sigma_n2);
  return select_branch_fpa(ev, delta_f, l_branches);
}

EnsembleRate ensemble_rate(std::span<const rates::AsrReport> reports) {
  if (reports.empty()) return {};
  const std::size_t k = reports.front().rc_bar.size();
  std::vector<double> common(k, 0.0);
  double priv = 0.0;
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < k; ++i) common[i] += r.rc_bar[i];
    priv += r.rp_bar;
  }
  const double n = static_cast<double>(reports.size());
  double min_common = k == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  for (double c : common) min_common = std::min(min_common, c / n);
  return {min_common, priv / n};
}

CalibrationResult calibrate_delta_f(std::span<rates::CandidateEvaluator> ensemble,
                                    std::span<const double> delta_grid) {
  if (ensemble.empty()) throw Error(ErrorCode::invalid_argument, "empty calibration ensemble");
  const BranchPattern identity = pattern(1, ensemble.front().users());
  const auto [delta_f, esr] = rates::optimize_delta(
      [&](double delta) { return ensemble_esr(ensemble, identity, delta); }, delta_grid);
  (void)esr;
  return {delta_f, 1, ensemble.size()};
}

CalibrationResult select_branch_fb(std::span<rates::CandidateEvaluator> ensemble,
                                   std::size_t l_branches, std::span<const double> delta_grid) {
  CalibrationResult out = calibrate_delta_f(ensemble, delta_grid);
  const auto branches = patterns(l_branches, ensemble.front().users());

  std::optional<double> best_esr;
  for (const auto& branch : branches) {
    const auto esr = ensemble_esr(ensemble, branch, out.delta_f);
    if (esr && (!best_esr || *esr > *best_esr)) {
      best_esr = esr;
      out.fixed_branch = branch.index;
    }
  }
  const BranchPattern& fixed = branches[out.fixed_branch - 1];
  out.delta_f = rates::optimize_delta(
                    [&](double delta) { return ensemble_esr(ensemble, fixed, delta); },
                    delta_grid)
                    .first;
  return out;
}

}  // namespace rsmb::branch
