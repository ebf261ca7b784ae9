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

// Command-line front end: SNR and CSIT-error sweeps, baselines and the
// closed-form/oracle deviation report, all written as CSV.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rsmb/error.hpp"
#include "rsmb/experiment.hpp"
#include "rsmb/kernels.hpp"
#include "rsmb/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::vector<std::string> settings;
  unsigned threads = 0;
  std::string kernel = "auto";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "key=value scenario file");
  cmd->add_option("--seed", o.seed, "master seed (overrides the config)");
  cmd->add_option("--out", o.out_path, "CSV destination (default: stdout)");
  cmd->add_option("--set", o.settings, "override one config key, e.g. --set K=4")
      ->allow_extra_args(false);
  cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
  cmd->add_option("--kernel", o.kernel, "kernel variant: auto, scalar, avx2");
}

rsmb::experiment::ScenarioConfig load_config(const CommonOptions& o) {
  rsmb::experiment::ScenarioConfig config;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw rsmb::Error(rsmb::ErrorCode::config_invalid, "cannot read " + o.config_path);
    std::stringstream text;
    text << in.rdbuf();
    config = rsmb::experiment::parse_config(text.str());
  }
  for (const auto& s : o.settings) rsmb::experiment::apply_setting(config, s);
  if (o.seed) config.seed = *o.seed;
  rsmb::experiment::validate(config);
  return config;
}

void select_kernel(const std::string& name) {
  const auto isa = rsmb::kernels::parse_isa(name);
  if (!isa) throw rsmb::Error(rsmb::ErrorCode::config_invalid, "unknown kernel '" + name + "'");
  rsmb::kernels::select(*isa);
}

template <class WriteFn>
void emit(const std::string& out_path, WriteFn&& write) {
  if (out_path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw rsmb::Error(rsmb::ErrorCode::io_failure, "cannot open " + out_path);
  write(file);
  if (!file) throw rsmb::Error(rsmb::ErrorCode::io_failure, "write failed for " + out_path);
}

int exit_code_for(rsmb::ErrorCode code) {
  switch (code) {
    case rsmb::ErrorCode::config_invalid:
    case rsmb::ErrorCode::invalid_argument:
    case rsmb::ErrorCode::index_out_of_range:
    case rsmb::ErrorCode::invalid_permutation:
    case rsmb::ErrorCode::shape_mismatch:
      return kExitConfig;
    case rsmb::ErrorCode::rank_deficient:
    case rsmb::ErrorCode::no_convergence:
    case rsmb::ErrorCode::no_private_power:
      return kExitNumerical;
    case rsmb::ErrorCode::io_failure:
      return kExitIo;
  }
  return kExitIo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-splitting multi-branch THP downlink simulator"};
  app.require_subcommand(1);

  CommonOptions snr_opts, err_opts, base_opts, val_opts;

  auto* snr_cmd = app.add_subcommand("snr-sweep", "ergodic sum rate versus SNR");
  add_common(snr_cmd, snr_opts);

  auto* err_cmd = app.add_subcommand("error-sweep", "ergodic sum rate versus CSIT error power");
  add_common(err_cmd, err_opts);
  std::vector<double> err_list{0.01, 0.03, 0.06, 0.1, 0.2};
  double err_snr = 20.0;
  err_cmd->add_option("--sigma-e2-list", err_list, "error powers to sweep")->delimiter(',');
  err_cmd->add_option("--snr-db", err_snr, "fixed SNR in dB");

  auto* base_cmd = app.add_subcommand("baselines", "THP, RS-THP and MB-THP reference rows");
  add_common(base_cmd, base_opts);

  auto* val_cmd = app.add_subcommand("validate", "closed-form versus signal-model SINR deviations");
  add_common(val_cmd, val_opts);
  rsmb::oracle::ValidationSettings vset;
  double val_snr = 20.0;
  val_cmd->add_option("--instances", vset.instances, "channel instances per error power");
  val_cmd->add_option("--sigma-e2-list", vset.sigma_e2_list, "error powers")->delimiter(',');
  val_cmd->add_option("--delta", vset.delta, "common power fraction");
  val_cmd->add_option("--snr-db", val_snr, "SNR in dB");
  val_cmd->add_option("--branch", vset.branch_index, "branch index (1-based)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (snr_cmd->parsed()) {
      select_kernel(snr_opts.kernel);
      const auto config = load_config(snr_opts);
      const auto rows = rsmb::experiment::run_snr_sweep(config, {snr_opts.threads});
      emit(snr_opts.out_path, [&](std::ostream& os) { rsmb::experiment::write_csv(rows, os); });
    } else if (err_cmd->parsed()) {
      select_kernel(err_opts.kernel);
      const auto config = load_config(err_opts);
      const auto rows =
          rsmb::experiment::run_error_sweep(config, err_list, err_snr, {err_opts.threads});
      emit(err_opts.out_path, [&](std::ostream& os) { rsmb::experiment::write_csv(rows, os); });
    } else if (base_cmd->parsed()) {
      select_kernel(base_opts.kernel);
      const auto config = load_config(base_opts);
      const auto rows = rsmb::experiment::run_baselines(config, {base_opts.threads});
      emit(base_opts.out_path, [&](std::ostream& os) { rsmb::experiment::write_csv(rows, os); });
    } else if (val_cmd->parsed()) {
      select_kernel(val_opts.kernel);
      const auto config = load_config(val_opts);
      vset.users = config.K;
      vset.antennas = config.Nt;
      vset.scheme = config.scheme;
      vset.sigma_n2 = config.sigma_n2;
      vset.seed = config.seed;
      vset.etr = config.sigma_n2 * std::pow(10.0, val_snr / 10.0);
      const auto rows = rsmb::oracle::deviation_sweep(vset);
      emit(val_opts.out_path, [&](std::ostream& os) {
        rsmb::oracle::write_deviation_csv(rows, vset.scheme, os);
      });
      for (double s : vset.sigma_e2_list) {
        std::vector<double> common, priv;
        for (const auto& r : rows) {
          if (r.sigma_e2 != s) continue;
          common.push_back(r.common_rel_dev);
          priv.push_back(r.private_rel_dev);
        }
        std::fprintf(stderr, "sigma_e2=%g median common dev=%.3e median private dev=%.3e\n", s,
                     rsmb::oracle::median(common), rsmb::oracle::median(priv));
      }
    }
  } catch (const rsmb::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}
