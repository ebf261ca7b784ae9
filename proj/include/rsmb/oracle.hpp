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

// First-principles SINRs taken straight from the end-to-end signal model,
// used to check the closed forms in rsrates.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "rsmb/branch_pattern.hpp"
#include "rsmb/channel.hpp"
#include "rsmb/complex_matrix.hpp"
#include "rsmb/rsrates.hpp"
#include "rsmb/thp.hpp"

namespace rsmb::oracle {

enum class CommonNumerator {
  true_channel,       // |h_k^T p_c|^2, what the receiver actually sees
  estimated_channel,  // |h^_k^T p_c|^2, as in the closed form
};

struct EffectiveGains {
  ComplexVector common_gain;         // h_k^T p_c (permuted order)
  ComplexMatrix private_gain_matrix; // (k, i): coefficient of effective symbol i at receiver k
  std::vector<double> receiver_scaling;  // g_k (decentralized) or 1 (centralized)
};

/// Private gains from the filter chain itself, treating s + d as the
/// unit-variance symbol vector:
///   dec.: beta diag(g) H_perm F B^-1
///   cen.: beta H_perm F diag(g) B^-1
/// where H_perm is the branch-permuted true channel. filters must come from
/// the permuted estimate and carry beta.
EffectiveGains effective_gain_matrix(const channel::ChannelRealization& realization,
                                     const thp::ThpFilterSet& filters,
                                     const rates::RsPowerSplit& split,
                                     const branch::BranchPattern& branch,
                                     CommonNumerator numerator = CommonNumerator::true_channel);

/// Standard SINRs of the model, common stream against all private streams,
/// private stream k after ideal removal of the common stream:
///   common_k  = |r_k c_k|^2 / (sum_i |M_ki|^2 + r_k^2 sigma_n^2)
///   private_k = |M_kk|^2 / (sum_{i != k} |M_ki|^2 + r_k^2 sigma_n^2)
rates::SinrReport model_sinr(const EffectiveGains& gains, double sigma_n2,
                             std::span<const double> receiver_scaling);

struct DeviationReport {
  std::vector<double> common_rel_dev;   // |closed - oracle| / oracle
  std::vector<double> private_rel_dev;
  std::vector<double> numerator_gap;    // |h_k p_c|^2 / |h^_k p_c|^2 - 1 (0 if delta = 0)
  rates::SinrReport closed_form;
  rates::SinrReport model;
  double max_common = 0.0;
  double max_private = 0.0;
};

/// Runs the closed forms and the model on the same instance.
DeviationReport compare_closed_form(const channel::ChannelRealization& realization,
                                    thp::Scheme scheme, double delta,
                                    const branch::BranchPattern& branch, double etr,
                                    double sigma_n2);

struct ValidationSettings {
  std::size_t users = 4;
  std::size_t antennas = 4;
  thp::Scheme scheme = thp::Scheme::decentralized;
  double etr = 100.0;
  double sigma_n2 = 1.0;
  double delta = 0.2;
  std::size_t branch_index = 1;
  std::vector<double> sigma_e2_list{0.0, 1e-6, 1e-4, 1e-2, 0.06};
  std::size_t instances = 200;
  std::uint64_t seed = 1;
};

struct ValidationRow {
  double sigma_e2 = 0.0;
  std::size_t instance = 0;
  std::size_t user = 0;
  double common_rel_dev = 0.0;
  double private_rel_dev = 0.0;
  double numerator_gap = 0.0;
};

/// Deviation sweep over sigma_e2_list x instances; instance i of every
/// sigma_e2 uses the same unit-variance draws.
std::vector<ValidationRow> deviation_sweep(const ValidationSettings& settings);

/// CSV with header
/// "scheme,sigma_e2,instance,user,common_rel_dev,private_rel_dev,common_numerator_gap".
void write_deviation_csv(std::span<const ValidationRow> rows, thp::Scheme scheme,
                         std::ostream& out);

double median(std::vector<double> values);

}  // namespace rsmb::oracle
