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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "rsmb/branch_pattern.hpp"
#include "rsmb/channel.hpp"
#include "rsmb/error.hpp"
#include "rsmb/matops.hpp"
#include "rsmb/multibranch.hpp"
#include "rsmb/rng.hpp"
#include "rsmb/rsrates.hpp"
#include "test_support.hpp"

using namespace rsmb;
using rsmb::testing::Gen;
using thp::Scheme;

namespace {

std::vector<ComplexMatrix> error_draws(Gen& gen, std::size_t k, std::size_t nt, std::size_t n,
                                       double sigma_e2) {
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(testing::random_matrix(gen, k, nt, sigma_e2 / static_cast<double>(nt)));
  return out;
}

// Objective of (branch, delta) recomputed from scratch with the public
// single-draw SINR functions; no evaluator caching involved.
double table_objective(const ComplexMatrix& h, const std::vector<ComplexMatrix>& errors,
                       const branch::BranchPattern& b, double delta, Scheme scheme, double etr) {
  const auto hp = matops::permute_rows(h, b.perm);
  auto f = thp::build_thp_filters(hp, scheme);
  const auto dir = matops::dominant_right_singular_direction(h);
  const auto split = rates::common_precoder(dir.v, delta, etr, 1.0);
  f.beta = thp::compute_beta(f, etr, split.pc_norm2());
  const std::size_t k = h.rows();
  std::vector<double> rc(k, 0.0);
  double rp = 0;
  for (const auto& e : errors) {
    const auto ep = matops::permute_rows(e, b.perm);
    const auto r = rates::instantaneous_rates(
        {rates::sinr_common(f, split, hp, ep), rates::sinr_private(f, split, hp, ep)});
    for (std::size_t i = 0; i < k; ++i) {
      rc[i] += r.common[i];
      rp += r.private_[i];
    }
  }
  const double n = static_cast<double>(errors.size());
  return *std::min_element(rc.begin(), rc.end()) / n + rp / n;
}

}  // namespace

TEST_CASE("pattern examples") {
  CHECK(branch::pattern(1, 4).perm == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(branch::pattern(2, 4).perm == std::vector<std::size_t>{3, 2, 1, 0});
  CHECK(branch::pattern(3, 4).perm == std::vector<std::size_t>{0, 3, 2, 1});
  CHECK(branch::pattern(4, 4).perm == std::vector<std::size_t>{0, 1, 3, 2});
  CHECK(branch::pattern(3, 4).index == 3);
  try {
    branch::pattern(5, 4);
    FAIL("expected index_out_of_range");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::index_out_of_range);
  }
  CHECK_THROWS_AS(branch::pattern(0, 4), Error);
  CHECK(branch::patterns(2, 4).size() == 2);
  CHECK_THROWS_AS(branch::patterns(5, 4), Error);
}

TEST_CASE("pattern properties") {
  for (std::size_t k = 1; k <= 8; ++k) {
    std::set<std::vector<std::size_t>> distinct;
    for (std::size_t l = 1; l <= k; ++l) {
      const auto p = branch::pattern(l, k);
      CHECK(matops::is_permutation(p.perm, k));
      for (std::size_t i = 0; i < k; ++i) CHECK(p.perm[p.perm[i]] == i);
      // Block formula: identity on the first l-2 slots, reversal after.
      const std::size_t fixed = l >= 2 ? l - 2 : k;
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t expect = i < fixed ? i : k - 1 - (i - fixed);
        CHECK(p.perm[i] == expect);
      }
      distinct.insert(p.perm);
    }
    // K = 1 has only the identity; otherwise T_K and T_1 coincide only when
    // the final block has length one, which cannot happen for l = K >= 2.
    CHECK(distinct.size() == k);
  }
}

TEST_CASE("common direction is invariant under every branch permutation") {
  Gen gen(41);
  for (int t = 0; t < 100; ++t) {
    const auto h = testing::random_matrix(gen, 5, 6);
    const auto base = matops::dominant_right_singular_direction(h);
    for (std::size_t l = 1; l <= 5; ++l) {
      const auto d = matops::dominant_right_singular_direction(
          matops::permute_rows(h, branch::pattern(l, 5).perm));
      CHECK(testing::max_abs_diff(d.v, base.v) < 1e-8);
    }
  }
}

TEST_CASE("ES matches a brute-force objective table") {
  Gen gen(42);
  const std::vector<double> grid{0.0, 0.1, 0.2, 0.4, 0.6};
  for (auto scheme : {Scheme::decentralized, Scheme::centralized}) {
    for (int t = 0; t < 15; ++t) {
      const auto h = testing::random_matrix(gen, 4, 4);
      const auto errors = error_draws(gen, 4, 4, 6, 0.08);
      rates::CandidateEvaluator ev(h, errors, scheme, 100.0, 1.0);
      const auto out = branch::select_branch_es(ev, 4, grid);

      double best = -INFINITY;
      std::size_t best_l = 0;
      double best_d = 0;
      for (std::size_t l = 1; l <= 4; ++l)
        for (double d : grid) {
          const double v = table_objective(h, errors, branch::pattern(l, 4), d, scheme, 100.0);
          // Strict comparison keeps the first (smaller l, then smaller delta).
          if (v > best + 1e-12) {
            best = v;
            best_l = l;
            best_d = d;
          }
        }
      CHECK(out.objective == doctest::Approx(best).epsilon(1e-10));
      CHECK(out.branch.index == best_l);
      CHECK(out.delta == best_d);
      CHECK(out.report.objective == out.objective);
      // Re-evaluation reproduces the stored objective.
      CHECK(std::abs(ev.evaluate(out.branch, out.delta).objective - out.objective) <= 1e-12);
      for (double d : grid) CHECK(out.objective >= ev.evaluate(branch::pattern(1, 4), d).objective);
    }
  }
}

TEST_CASE("ES and FPA single-candidate cases") {
  Gen gen(43);
  const auto h = testing::random_matrix(gen, 3, 3);
  rates::CandidateEvaluator ev(h, error_draws(gen, 3, 3, 4, 0.05), Scheme::decentralized, 100, 1);
  const std::vector<double> one{0.35};
  const auto es = branch::select_branch_es(ev, 1, one);
  CHECK(es.branch.index == 1);
  CHECK(es.delta == 0.35);
  const auto fpa = branch::select_branch_fpa(ev, 0.35, 1);
  CHECK(fpa.branch.index == 1);
  CHECK(fpa.objective == es.objective);
  CHECK_THROWS_AS(branch::select_branch_es(ev, 4, one), Error);
}

TEST_CASE("FPA equals ES on the single-point grid and dominates branch 1") {
  Gen gen(44);
  for (int t = 0; t < 20; ++t) {
    const auto h = testing::random_matrix(gen, 4, 4);
    rates::CandidateEvaluator ev(h, error_draws(gen, 4, 4, 5, 0.06), Scheme::decentralized, 100, 1);
    const double df = 0.15;
    const auto fpa = branch::select_branch_fpa(ev, df, 4);
    const std::vector<double> g{df};
    const auto es1 = branch::select_branch_es(ev, 4, g);
    CHECK(fpa.branch == es1.branch);
    CHECK(fpa.objective == es1.objective);
    const auto es = branch::select_branch_es(ev, 4, rates::default_delta_grid());
    const double b1 = ev.evaluate(branch::pattern(1, 4), df).objective;
    CHECK(es.objective >= fpa.objective);
    CHECK(fpa.objective >= b1);
  }
}

TEST_CASE("rng-driven overloads use common random numbers") {
  Gen gen(45);
  const auto h = testing::random_matrix(gen, 3, 4);
  auto r1 = derive_stream(9, 0, StreamPurpose::error);
  auto r2 = derive_stream(9, 0, StreamPurpose::error);
  const std::vector<double> grid{0.0, 0.2};
  const auto a = branch::select_branch_es(h, 3, grid, 8, Scheme::centralized, 0.05, 100, 1, r1);
  std::vector<ComplexMatrix> errors;
  for (int i = 0; i < 8; ++i) errors.push_back(channel::draw_error(3, 4, 0.05, r2));
  rates::CandidateEvaluator ev(h, errors, Scheme::centralized, 100, 1);
  const auto b = branch::select_branch_es(ev, 3, grid);
  CHECK(a.objective == b.objective);
  CHECK(a.branch == b.branch);
}

TEST_CASE("calibration of delta_f") {
  Gen gen(46);
  auto make_ensemble = [&](std::size_t n) {
    std::vector<rates::CandidateEvaluator> ens;
    for (std::size_t i = 0; i < n; ++i)
      ens.emplace_back(testing::random_matrix(gen, 4, 4), error_draws(gen, 4, 4, 5, 0.06),
                       Scheme::decentralized, 100.0, 1.0);
    return ens;
  };
  const auto grid = rates::default_delta_grid();

  SUBCASE("grid {0}") {
    auto ens = make_ensemble(3);
    const std::vector<double> zero{0.0};
    CHECK(branch::calibrate_delta_f(ens, zero).delta_f == 0.0);
  }
  SUBCASE("ensemble of one matches optimize_delta") {
    auto ens = make_ensemble(1);
    const auto cal = branch::calibrate_delta_f(ens, grid);
    const auto best = rates::optimize_delta(
        [&](double d) -> std::optional<double> {
          return ens[0].evaluate(branch::pattern(1, 4), d).objective;
        },
        grid);
    CHECK(cal.delta_f == best.first);
    CHECK(cal.n_cal == 1);
  }
  SUBCASE("matches a tabulated ensemble ESR curve") {
    auto ens = make_ensemble(8);
    const auto cal = branch::calibrate_delta_f(ens, grid);
    double best = -INFINITY, best_d = -1;
    for (double d : grid) {
      std::vector<rates::AsrReport> reports;
      for (auto& ev : ens) reports.push_back(ev.evaluate(branch::pattern(1, 4), d));
      // Independent ESR: min over users of the ensemble-mean common rate plus mean private.
      std::vector<double> rc(4, 0.0);
      double rp = 0;
      for (const auto& r : reports) {
        for (std::size_t k = 0; k < 4; ++k) rc[k] += r.rc_bar[k];
        rp += r.rp_bar;
      }
      const double esr = (*std::min_element(rc.begin(), rc.end()) + rp) / reports.size();
      if (esr > best + 1e-12) {
        best = esr;
        best_d = d;
      }
      const auto er = branch::ensemble_rate(reports);
      CHECK(er.esr() == doctest::Approx(esr).epsilon(1e-12));
    }
    CHECK(cal.delta_f == best_d);
    CHECK(cal.n_cal == 8);
  }
}

TEST_CASE("fixed-branch selection") {
  Gen gen(47);
  const auto grid = rates::default_delta_grid();
  std::vector<rates::CandidateEvaluator> ens;
  for (int i = 0; i < 8; ++i)
    ens.emplace_back(testing::random_matrix(gen, 4, 4), error_draws(gen, 4, 4, 5, 0.06),
                     Scheme::decentralized, 100.0, 1.0);

  SUBCASE("one branch") {
    const auto fb = branch::select_branch_fb(ens, 1, grid);
    CHECK(fb.fixed_branch == 1);
    CHECK(fb.delta_f == branch::calibrate_delta_f(ens, grid).delta_f);
  }
  SUBCASE("brute-force branch table") {
    const auto fb = branch::select_branch_fb(ens, 4, grid);
    const double df0 = branch::calibrate_delta_f(ens, grid).delta_f;
    auto esr_at = [&](std::size_t l, double d) {
      std::vector<rates::AsrReport> reports;
      for (auto& ev : ens) reports.push_back(ev.evaluate(branch::pattern(l, 4), d));
      return branch::ensemble_rate(reports).esr();
    };
    double best = -INFINITY;
    std::size_t best_l = 0;
    for (std::size_t l = 1; l <= 4; ++l) {
      const double v = esr_at(l, df0);
      if (v > best) {
        best = v;
        best_l = l;
      }
    }
    CHECK(fb.fixed_branch == best_l);
    double best_d = -1, best_v = -INFINITY;
    for (double d : grid) {
      const double v = esr_at(best_l, d);
      if (v > best_v) {
        best_v = v;
        best_d = d;
      }
    }
    CHECK(fb.delta_f == best_d);
  }
  SUBCASE("symmetric ensemble ties to branch 1") {
    // A diagonal estimate with equal gains and no error looks the same in every order.
    std::vector<rates::CandidateEvaluator> sym;
    for (int i = 0; i < 3; ++i)
      sym.emplace_back(ComplexMatrix::identity(4), std::vector<ComplexMatrix>{ComplexMatrix(4, 4)},
                       Scheme::decentralized, 100.0, 1.0);
    CHECK(branch::select_branch_fb(sym, 4, grid).fixed_branch == 1);
  }
}
