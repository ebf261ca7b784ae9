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
#include <cstdint>
#include <optional>
#include <vector>

#include "rsmb/multibranch.hpp"
#include "rsmb/rsrates.hpp"
#include "rsmb/thp.hpp"

namespace rsmb::rates {

/// How the per-estimate (branch, delta) is chosen.
///   es    exhaustive search over branches and the delta grid
///   fpa   calibrated delta_f, per-estimate branch search
///   fb    calibrated fixed branch and delta, no per-estimate search
///   none  branch 1, per-estimate delta search (or delta = 0 without RS)
enum class Criterion { es, fpa, fb, none };

/// One operating point: everything needed to produce an EsrResult.
struct Scenario {
  std::size_t users = 8;
  std::size_t antennas = 8;
  thp::Scheme scheme = thp::Scheme::decentralized;
  Criterion criterion = Criterion::es;
  bool rs_enabled = true;
  std::size_t l_branches = 4;
  double etr = 100.0;
  double sigma_n2 = 1.0;
  double sigma_e2 = 0.0;
  std::vector<double> delta_grid = default_delta_grid();
  std::size_t n_estimates = 100;
  std::size_t n_err = 100;
  std::size_t n_cal = 20;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency

  // Grid actually searched: {0} when RS is disabled.
  std::vector<double> effective_grid() const;
  // Branch count actually searched: 1 for Criterion::none.
  std::size_t effective_branches() const;
};

/// Criterion state fixed before any estimate is evaluated.
struct PreparedPolicy {
  Criterion criterion = Criterion::es;
  std::vector<double> grid;
  std::size_t l_branches = 1;
  std::optional<branch::CalibrationResult> calibration;  // fpa and fb only
  std::size_t calibration_skipped = 0;
};

/// Draws the calibration ensemble (its own streams) and calibrates delta_f or
/// the fixed branch when the criterion needs it.
PreparedPolicy prepare_policy(const Scenario& scenario);

struct EstimateOutcome {
  std::size_t trial = 0;
  bool skipped = false;  // rank-deficient estimate
  bool direction_converged = true;
  std::size_t branch = 1;
  double delta = 0.0;
  AsrReport report;
};

/// Evaluates estimate trial t; a pure function of (scenario, policy, t).
EstimateOutcome evaluate_estimate_trial(const Scenario& scenario, const PreparedPolicy& policy,
                                        std::size_t trial);

struct EsrResult {
  double esr = 0.0;
  double common_part = 0.0;
  double private_part = 0.0;
  double std_error = 0.0;  // of the mean per-estimate objective
  std::size_t n_estimates = 0;  // contributing (non-skipped) estimates
  std::size_t n_skipped = 0;
  std::size_t n_unconverged_directions = 0;
  PreparedPolicy policy;
  std::vector<EstimateOutcome> per_estimate;
};

/// Aggregates per-estimate outcomes in trial order.
EsrResult aggregate(std::vector<EstimateOutcome> outcomes, PreparedPolicy policy);

/// Full ESR for a scenario; trials run on a worker pool and are reduced in
/// trial order, so the result does not depend on the worker count.
EsrResult ergodic_sum_rate(const Scenario& scenario);

}  // namespace rsmb::rates
