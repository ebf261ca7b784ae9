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

#include <cmath>

#include "rsmb/error.hpp"
#include "rsmb/matops.hpp"
#include "rsmb/thp.hpp"
#include "test_support.hpp"

using namespace rsmb;
using rsmb::testing::Gen;
using thp::Scheme;

TEST_CASE("filters for the identity channel") {
  for (auto scheme : {Scheme::decentralized, Scheme::centralized}) {
    const auto f = thp::build_thp_filters(ComplexMatrix::identity(3), scheme);
    CHECK(testing::max_abs_diff(f.F, ComplexMatrix::identity(3)) < 1e-14);
    CHECK(testing::max_abs_diff(f.B, ComplexMatrix::identity(3)) < 1e-14);
    CHECK(testing::max_abs_diff(f.W, ComplexMatrix::identity(3)) < 1e-14);
    for (double g : f.g) CHECK(g == doctest::Approx(1.0));
    CHECK(thp::compute_beta(f, 30.0, 0.0) == doctest::Approx(std::sqrt(10.0)));
  }
}

TEST_CASE("filters for a diagonal channel") {
  const ComplexMatrix h{{2, 0}, {0, 4}};
  const auto d = thp::build_thp_filters(h, Scheme::decentralized);
  CHECK(d.g[0] == doctest::Approx(0.5));
  CHECK(d.g[1] == doctest::Approx(0.25));
  CHECK(testing::max_abs_diff(d.W, ComplexMatrix::identity(2)) < 1e-14);
  CHECK(thp::compute_beta(d, 10.0, 2.0) == doctest::Approx(2.0));

  const auto c = thp::build_thp_filters(h, Scheme::centralized);
  CHECK(std::abs(c.W(0, 0) - 0.5) < 1e-14);
  CHECK(std::abs(c.W(1, 1) - 0.25) < 1e-14);
  CHECK(c.inverse_lhat2_sum() == doctest::Approx(0.3125));
  CHECK(thp::compute_beta(c, 10.0, 0.0) == doctest::Approx(std::sqrt(32.0)));
}

TEST_CASE("beta needs private power") {
  const auto f = thp::build_thp_filters(ComplexMatrix::identity(2), Scheme::decentralized);
  try {
    thp::compute_beta(f, 10.0, 10.0);
    FAIL("expected no_private_power");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_private_power);
  }
}

TEST_CASE("triangular identities on random channels") {
  Gen gen(21);
  for (int t = 0; t < 300; ++t) {
    std::uniform_int_distribution<std::size_t> dim(2, 8);
    const std::size_t k = dim(gen);
    const std::size_t nt = std::max(k, dim(gen));
    const auto h = testing::random_matrix(gen, k, nt);
    for (auto scheme : {Scheme::decentralized, Scheme::centralized}) {
      const auto f = thp::build_thp_filters(h, scheme);
      ComplexMatrix g = ComplexMatrix::diagonal(std::span<const double>(f.g));
      // Unit diagonal, lower triangular feedback.
      for (std::size_t i = 0; i < k; ++i) {
        CHECK(std::abs(f.B(i, i) - 1.0) < 1e-14);
        for (std::size_t j = i + 1; j < k; ++j) CHECK(f.B(i, j) == cdouble(0, 0));
      }
      // The estimated channel seen through F is L.
      CHECK(testing::max_abs_diff(testing::naive_multiply(h, f.F), f.L) < 1e-10);
      const auto b_inv = matops::lower_triangular_inverse(f.B);
      if (scheme == Scheme::decentralized) {
        CHECK(testing::max_abs_diff(testing::naive_multiply(g, f.L), f.B) < 1e-12);
        // G H W = I: each receiver sees only its own stream after scaling.
        CHECK(testing::max_abs_diff(testing::naive_multiply(g, testing::naive_multiply(h, f.W)),
                                    ComplexMatrix::identity(k)) < 1e-9);
        CHECK(testing::max_abs_diff(testing::naive_multiply(f.F, b_inv), f.W) < 1e-9);
      } else {
        CHECK(testing::max_abs_diff(testing::naive_multiply(f.L, g), f.B) < 1e-12);
        CHECK(testing::max_abs_diff(testing::naive_multiply(h, f.W), ComplexMatrix::identity(k)) < 1e-9);
        CHECK(testing::max_abs_diff(testing::naive_multiply(testing::naive_multiply(f.F, g), b_inv), f.W) < 1e-9);
      }
    }
  }
}

TEST_CASE("beta closes the power budget for unit-variance effective symbols") {
  Gen gen(22);
  for (auto scheme : {Scheme::decentralized, Scheme::centralized}) {
    for (double delta : {0.0, 0.3}) {
      const auto h = testing::random_matrix(gen, 4, 4);
      auto f = thp::build_thp_filters(h, scheme);
      const double etr = 100.0;
      f.beta = thp::compute_beta(f, etr, delta * etr);
      auto pc = testing::random_unit_vector(gen, 4);
      for (auto& x : pc) x *= std::sqrt(delta * etr);
      const int n = 20000;
      double acc = 0, acc2 = 0;
      for (int i = 0; i < n; ++i) {
        const auto v = testing::random_qpsk(gen, 4);
        const auto sc = testing::random_qpsk(gen, 1)[0];
        const double p = norm2(thp::build_transmit_vector(f, v, sc, pc));
        acc += p;
        acc2 += p * p;
      }
      const double mean = acc / n;
      const double se = std::sqrt((acc2 / n - mean * mean) / n);
      CAPTURE(delta);
      CHECK(std::abs(mean - etr) < 4 * se + 1e-9);
    }
  }
}

TEST_CASE("modulo examples") {
  const auto q = thp::ModuloParams::qpsk();
  const double lam = 2 * std::sqrt(2.0);
  CHECK(q.lambda == doctest::Approx(lam));
  CHECK(thp::ModuloParams::qam16().lambda == doctest::Approx(8 / std::sqrt(10.0)));
  CHECK(std::abs(thp::modulo_reduce({0.3, -0.2}, q) - cdouble(0.3, -0.2)) < 1e-15);
  CHECK(std::abs(thp::modulo_reduce({lam + 0.1, 0}, q) - cdouble(0.1, 0)) < 1e-14);
  CHECK(std::abs(thp::modulo_reduce({0, -lam - 0.25}, q) - cdouble(0, -0.25)) < 1e-14);
  // Half-open interval: +lambda/2 maps to -lambda/2.
  CHECK(thp::modulo_reduce({lam / 2, 0}, q).real() == doctest::Approx(-lam / 2));
  CHECK(thp::modulo_reduce({-lam / 2, 0}, q).real() == doctest::Approx(-lam / 2));
}

TEST_CASE("modulo range and idempotence") {
  Gen gen(23);
  const auto q = thp::ModuloParams::qpsk();
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 100000; ++i) {
    const cdouble z{u(gen), u(gen)};
    const cdouble m = thp::modulo_reduce(z, q);
    CHECK_MESSAGE(m.real() >= -q.lambda / 2, z);
    CHECK_MESSAGE(m.real() < q.lambda / 2, z);
    CHECK_MESSAGE(m.imag() >= -q.lambda / 2, z);
    CHECK_MESSAGE(m.imag() < q.lambda / 2, z);
    CHECK(thp::modulo_reduce(m, q) == m);
    // Difference is on the lattice.
    const cdouble d = (z - m) / q.lambda;
    CHECK(std::abs(d.real() - std::round(d.real())) < 1e-9);
    CHECK(std::abs(d.imag() - std::round(d.imag())) < 1e-9);
  }
}

TEST_CASE("encode examples") {
  const auto q = thp::ModuloParams::qpsk();
  const double a = 1 / std::sqrt(2.0);
  SUBCASE("identity feedback passes symbols through") {
    const ComplexVector s{{a, a}, {-a, a}};
    const auto enc = thp::thp_encode(s, ComplexMatrix::identity(2), q);
    CHECK(testing::max_abs_diff(enc.v, s) < 1e-15);
    CHECK(enc.d[0] == cdouble(0, 0));
    CHECK(enc.d[1] == cdouble(0, 0));
  }
  SUBCASE("strong feedback triggers a wrap") {
    const ComplexMatrix b{{1, 0}, {3, 1}};
    const ComplexVector s{{a, 0}, {0, 0}};
    const auto enc = thp::thp_encode(s, b, q);
    // pre = -3a = -2.1213, wraps by +lambda
    CHECK(std::abs(enc.v[1] - cdouble(-3 * a + q.lambda, 0)) < 1e-14);
    CHECK(std::abs(enc.d[1] - cdouble(q.lambda, 0)) < 1e-14);
  }
}

TEST_CASE("encode satisfies B v - d = s") {
  Gen gen(24);
  const auto q = thp::ModuloParams::qpsk();
  for (int t = 0; t < 1000; ++t) {
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    const std::size_t k = dim(gen);
    const auto b = testing::random_unit_lower(gen, k, 4.0);
    const auto s = testing::random_qpsk(gen, k);
    const auto enc = thp::thp_encode(s, b, q);
    auto bv = testing::naive_multiply(b, ComplexMatrix(k, 1, enc.v));
    ComplexVector lhs(k);
    for (std::size_t i = 0; i < k; ++i) lhs[i] = bv(i, 0) - enc.d[i];
    CHECK(testing::max_abs_diff(lhs, s) < 1e-12);
    for (auto v : enc.v) {
      CHECK(std::abs(v.real()) <= q.lambda / 2);
      CHECK(std::abs(v.imag()) <= q.lambda / 2);
    }
  }
}

TEST_CASE("transmit vector requires beta and matching shapes") {
  auto f = thp::build_thp_filters(ComplexMatrix::identity(2), Scheme::decentralized);
  const ComplexVector v{1, 1}, pc{0, 0};
  CHECK_THROWS_AS(thp::build_transmit_vector(f, v, 0, pc), Error);
  f.beta = 1.0;
  CHECK_THROWS_AS(thp::build_transmit_vector(f, v, 0, ComplexVector{0}), Error);
  CHECK(testing::max_abs_diff(thp::build_transmit_vector(f, v, 0, pc), v) < 1e-15);
}
