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
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsmb/channel.hpp"
#include "rsmb/ergodic.hpp"
#include "rsmb/thp.hpp"

namespace rsmb::experiment {

/// Scenario description read from a key=value file. Defaults reproduce the
/// reference setup: 8 users, 8 antennas, 4 branches, unit noise, 100 channel
/// estimates with 100 error draws each.
struct ScenarioConfig {
  std::size_t K = 8;
  std::size_t Nt = 8;
  thp::Scheme scheme = thp::Scheme::decentralized;
  rates::Criterion criterion = rates::Criterion::es;
  bool rs = true;
  std::size_t L = 4;
  std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
  double sigma_n2 = 1.0;
  channel::ErrorModel error_model = channel::ErrorModel::scaling(0.95, 0.6);
  std::vector<double> delta_grid = rates::default_delta_grid();
  std::size_t n_estimates = 100;
  std::size_t n_err = 100;
  std::size_t n_cal = 20;
  std::uint64_t seed = 1;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses line-oriented key=value text ('#' comments, comma-separated lists).
/// Omitted keys keep their defaults. Throws Error(config_invalid) naming the
/// offending key.
ScenarioConfig parse_config(std::string_view text);

/// Applies one key=value assignment. Only the value itself is checked; call
/// validate() once all overrides are in.
void apply_setting(ScenarioConfig& config, std::string_view assignment);

/// Throws Error(config_invalid) on the first violated constraint.
void validate(const ScenarioConfig& config);

/// Text accepted by parse_config that reproduces `config` exactly.
std::string serialize_config(const ScenarioConfig& config);

std::string_view to_string(thp::Scheme scheme) noexcept;
std::string_view to_string(rates::Criterion criterion) noexcept;

struct SweepRow {
  std::string scheme;     // e.g. "rs-mb-dthp", "rs-dthp", "dthp"
  std::string criterion;  // es, fpa, fb, none
  double snr_db = 0.0;
  double sigma_e2 = 0.0;
  double esr = 0.0;
  double common_part = 0.0;
  double private_part = 0.0;
  double std_error = 0.0;
  double mean_delta = 0.0;
  std::vector<std::size_t> branch_histogram;  // entry l-1 counts branch l

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct RunOptions {
  unsigned workers = 0;  // 0: hardware concurrency
};

/// Scenario for one operating point of the config; Etr = sigma_n2 10^(snr/10).
rates::Scenario scenario_for(const ScenarioConfig& config, double snr_db, double sigma_e2,
                             unsigned workers = 0);

SweepRow make_row(const ScenarioConfig& config, double snr_db, const rates::Scenario& scenario,
                  const rates::EsrResult& result);

/// One row per SNR point, sigma_e2 from the error model.
std::vector<SweepRow> run_snr_sweep(const ScenarioConfig& config, RunOptions options = {});

/// One row per listed sigma_e2 at a fixed SNR.
std::vector<SweepRow> run_error_sweep(const ScenarioConfig& config,
                                      std::span<const double> sigma_e2_list, double snr_db_fixed,
                                      RunOptions options = {});

/// Conventional THP (no RS, branch 1), RS-THP (branch 1, delta searched) and
/// MB-THP without RS (delta = 0, branch searched), per SNR point, on the same
/// seeds as the configured scheme.
std::vector<SweepRow> run_baselines(const ScenarioConfig& config, RunOptions options = {});

inline constexpr std::string_view kCsvHeader =
    "scheme,criterion,snr_db,sigma_e2,esr,common_part,private_part,stderr,mean_delta,"
    "branch_histogram";

void write_csv(std::span<const SweepRow> rows, std::ostream& out);
std::string to_csv(std::span<const SweepRow> rows);
/// Throws Error(io_failure).
void write_csv(std::span<const SweepRow> rows, const std::filesystem::path& destination);

}  // namespace rsmb::experiment
