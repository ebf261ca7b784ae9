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

#include "rsmb/ergodic.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rsmb/channel.hpp"
#include "rsmb/error.hpp"
#include "rsmb/parallel.hpp"

namespace rsmb {

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  unsigned count = workers == 0 ? std::thread::hardware_concurrency() : workers;
  if (count == 0) count = 1;
  if (count > n) count = static_cast<unsigned>(n);
  if (count == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rsmb

namespace rsmb::rates {
namespace {

struct Trial {
  ComplexMatrix h_est;
  std::vector<ComplexMatrix> errors;
};

Trial draw_trial(const Scenario& s, std::size_t trial, StreamPurpose estimate_purpose,
                 StreamPurpose error_purpose) {
  Rng est_rng = derive_stream(s.seed, trial, estimate_purpose);
  Rng err_rng = derive_stream(s.seed, trial, error_purpose);
  Trial t{channel::draw_estimate(s.users, s.antennas, est_rng), {}};
  t.errors.reserve(s.n_err);
  for (std::size_t i = 0; i < s.n_err; ++i)
    t.errors.push_back(channel::draw_error(s.users, s.antennas, s.sigma_e2, err_rng));
  return t;
}

void validate(const Scenario& s) {
  if (s.users < 2 || s.antennas < s.users)
    throw Error(ErrorCode::invalid_argument, "scenario requires Nt >= K >= 2");
  if (s.l_branches < 1 || s.l_branches > s.users)
    throw Error(ErrorCode::index_out_of_range, "branch count must lie in 1..K");
  if (s.n_estimates < 1 || s.n_err < 1 || s.n_cal < 1)
    throw Error(ErrorCode::invalid_argument, "trial counts must be >= 1");
  if (s.delta_grid.empty()) throw Error(ErrorCode::invalid_argument, "empty delta grid");
  if (!(s.etr > 0.0) || !(s.sigma_n2 > 0.0) || !(s.sigma_e2 >= 0.0))
    throw Error(ErrorCode::invalid_argument, "Etr, sigma_n2 must be > 0 and sigma_e2 >= 0");
}

}  // namespace

std::vector<double> Scenario::effective_grid() const {
  if (!rs_enabled) return {0.0};
  return delta_grid;
}

std::size_t Scenario::effective_branches() const {
  return criterion == Criterion::none ? 1 : l_branches;
}

PreparedPolicy prepare_policy(const Scenario& scenario) {
  validate(scenario);
  PreparedPolicy policy;
  policy.criterion = scenario.criterion;
  policy.grid = scenario.effective_grid();
  policy.l_branches = scenario.effective_branches();
  if (scenario.criterion != Criterion::fpa && scenario.criterion != Criterion::fb) return policy;

  std::vector<std::optional<CandidateEvaluator>> slots(scenario.n_cal);
  parallel_for(scenario.n_cal, scenario.workers, [&](std::size_t t) {
    Trial trial = draw_trial(scenario, t, StreamPurpose::calibration_estimate,
                             StreamPurpose::calibration_error);
    try {
      CandidateEvaluator ev(std::move(trial.h_est), std::move(trial.errors), scenario.scheme,
                            scenario.etr, scenario.sigma_n2);
      // Build the identity-branch filters now so rank deficiency shows up here.
      ev.filters(branch::pattern(1, scenario.users));
      slots[t].emplace(std::move(ev));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::rank_deficient) throw;
    }
  });
  std::vector<CandidateEvaluator> ensemble;
  for (auto& slot : slots) {
    if (slot) {
      ensemble.push_back(std::move(*slot));
    } else {
      ++policy.calibration_skipped;
    }
  }
  if (ensemble.empty()) throw Error(ErrorCode::rank_deficient, "every calibration draw degenerate");

  policy.calibration = scenario.criterion == Criterion::fpa
                           ? branch::calibrate_delta_f(ensemble, policy.grid)
                           : branch::select_branch_fb(ensemble, policy.l_branches, policy.grid);
  return policy;
}

EstimateOutcome evaluate_estimate_trial(const Scenario& scenario, const PreparedPolicy& policy,
                                        std::size_t trial) {
  EstimateOutcome out;
  out.trial = trial;
  Trial t = draw_trial(scenario, trial, StreamPurpose::estimate, StreamPurpose::error);
  try {
    CandidateEvaluator ev(std::move(t.h_est), std::move(t.errors), scenario.scheme, scenario.etr,
                          scenario.sigma_n2);
    out.direction_converged = ev.direction_converged();
    branch::SelectionOutcome chosen;
    switch (policy.criterion) {
      case Criterion::es:
      case Criterion::none:
        chosen = branch::select_branch_es(ev, policy.l_branches, policy.grid);
        break;
      case Criterion::fpa:
        chosen = branch::select_branch_fpa(ev, policy.calibration->delta_f, policy.l_branches);
        break;
      case Criterion::fb: {
        const auto fixed = branch::pattern(policy.calibration->fixed_branch, scenario.users);
        auto report = ev.evaluate(fixed, policy.calibration->delta_f);
        chosen = {fixed, policy.calibration->delta_f, report.objective, std::move(report)};
        break;
      }
    }
    out.branch = chosen.branch.index;
    out.delta = chosen.delta;
    out.report = std::move(chosen.report);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::rank_deficient) throw;
    out.skipped = true;
  }
  return out;
}

EsrResult aggregate(std::vector<EstimateOutcome> outcomes, PreparedPolicy policy) {
  EsrResult result;
  std::vector<AsrReport> reports;
  reports.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    if (o.skipped) {
      ++result.n_skipped;
      continue;
    }
    if (!o.direction_converged) ++result.n_unconverged_directions;
    reports.push_back(o.report);
  }
  const auto rate = branch::ensemble_rate(reports);
  result.common_part = rate.common_part;
  result.private_part = rate.private_part;
  result.esr = rate.common_part + rate.private_part;
  result.n_estimates = reports.size();
  if (reports.size() > 1) {
    double mean = 0.0;
    for (const auto& r : reports) mean += r.objective;
    mean /= static_cast<double>(reports.size());
    double ss = 0.0;
    for (const auto& r : reports) ss += (r.objective - mean) * (r.objective - mean);
    const double n = static_cast<double>(reports.size());
    result.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  result.policy = std::move(policy);
  result.per_estimate = std::move(outcomes);
  return result;
}

EsrResult ergodic_sum_rate(const Scenario& scenario) {
  PreparedPolicy policy = prepare_policy(scenario);
  std::vector<EstimateOutcome> outcomes(scenario.n_estimates);
  parallel_for(scenario.n_estimates, scenario.workers, [&](std::size_t t) {
    outcomes[t] = evaluate_estimate_trial(scenario, policy, t);
  });
  return aggregate(std::move(outcomes), std::move(policy));
}

}  // namespace rsmb::rates
