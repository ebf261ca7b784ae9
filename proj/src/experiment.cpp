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

#include "rsmb/experiment.hpp"

#include <cmath>

#include "rsmb/error.hpp"

namespace rsmb::experiment {
namespace {

std::string scheme_label(const ScenarioConfig& c) {
  std::string label;
  if (c.rs) label += "rs-";
  if (c.criterion != rates::Criterion::none && c.L > 1) label += "mb-";
  label += to_string(c.scheme);
  return label;
}

std::vector<SweepRow> sweep(const ScenarioConfig& config, std::span<const double> snr_points,
                            std::span<const double> sigma_overrides, RunOptions options) {
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < snr_points.size(); ++i) {
    const double snr = snr_points[i];
    const double etr = config.sigma_n2 * std::pow(10.0, snr / 10.0);
    const double sigma_e2 = sigma_overrides.empty() ? channel::error_variance(config.error_model, etr)
                                                    : sigma_overrides[i];
    const rates::Scenario scenario = scenario_for(config, snr, sigma_e2, options.workers);
    rows.push_back(make_row(config, snr, scenario, rates::ergodic_sum_rate(scenario)));
  }
  return rows;
}

}  // namespace

rates::Scenario scenario_for(const ScenarioConfig& config, double snr_db, double sigma_e2,
                             unsigned workers) {
  rates::Scenario s;
  s.users = config.K;
  s.antennas = config.Nt;
  s.scheme = config.scheme;
  s.criterion = config.criterion;
  s.rs_enabled = config.rs;
  s.l_branches = config.L;
  s.etr = config.sigma_n2 * std::pow(10.0, snr_db / 10.0);
  s.sigma_n2 = config.sigma_n2;
  s.sigma_e2 = sigma_e2;
  s.delta_grid = config.delta_grid;
  s.n_estimates = config.n_estimates;
  s.n_err = config.n_err;
  s.n_cal = config.n_cal;
  s.seed = config.seed;
  s.workers = workers;
  return s;
}

SweepRow make_row(const ScenarioConfig& config, double snr_db, const rates::Scenario& scenario,
                  const rates::EsrResult& result) {
  SweepRow row;
  row.scheme = scheme_label(config);
  row.criterion = std::string(to_string(config.criterion));
  row.snr_db = snr_db;
  row.sigma_e2 = scenario.sigma_e2;
  row.esr = result.esr;
  row.common_part = result.common_part;
  row.private_part = result.private_part;
  row.std_error = result.std_error;
  row.branch_histogram.assign(scenario.effective_branches(), 0);
  double delta_sum = 0.0;
  for (const auto& o : result.per_estimate) {
    if (o.skipped) continue;
    delta_sum += o.delta;
    ++row.branch_histogram[o.branch - 1];
  }
  row.mean_delta = result.n_estimates == 0 ? 0.0 : delta_sum / static_cast<double>(result.n_estimates);
  return row;
}

std::vector<SweepRow> run_snr_sweep(const ScenarioConfig& config, RunOptions options) {
  validate(config);
  return sweep(config, config.snr_db, {}, options);
}

std::vector<SweepRow> run_error_sweep(const ScenarioConfig& config,
                                      std::span<const double> sigma_e2_list, double snr_db_fixed,
                                      RunOptions options) {
  validate(config);
  if (sigma_e2_list.empty()) {
    throw Error(ErrorCode::config_invalid, "key 'sigma_e2': error sweep list must not be empty");
  }
  for (double s : sigma_e2_list) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::config_invalid, "key 'sigma_e2': sweep values must be >= 0");
    }
  }
  if (!std::isfinite(snr_db_fixed)) {
    throw Error(ErrorCode::config_invalid, "key 'snr_db': fixed SNR must be finite");
  }
  const std::vector<double> snr_points(sigma_e2_list.size(), snr_db_fixed);
  return sweep(config, snr_points, sigma_e2_list, options);
}

std::vector<SweepRow> run_baselines(const ScenarioConfig& config, RunOptions options) {
  validate(config);
  ScenarioConfig thp = config;  // conventional THP
  thp.rs = false;
  thp.criterion = rates::Criterion::none;

  ScenarioConfig rs_thp = config;  // RS-THP, branch 1, delta searched per estimate
  rs_thp.rs = true;
  rs_thp.criterion = rates::Criterion::none;

  ScenarioConfig mb_thp = config;  // MB-THP without RS
  mb_thp.rs = false;
  mb_thp.criterion = rates::Criterion::es;

  std::vector<SweepRow> rows;
  for (const ScenarioConfig* c : {&thp, &rs_thp, &mb_thp}) {
    auto part = run_snr_sweep(*c, options);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

}  // namespace rsmb::experiment
