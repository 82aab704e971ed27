// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heis/repn.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {

const XiGrid kXi = symmetric_xi_grid(4, 10.0);

// Gaussian vector centred well inside the xi grid.
Eigen::VectorXcd test_vector(const XiGrid& xi, double c = 0.3) {
  Eigen::VectorXcd v(xi.n);
  for (long i = 0; i < xi.n; ++i) {
    const double s = xi.xi(i) - c;
    v(i) = std::exp(-kPi * s * s) * std::polar(1.0, 0.7 * s);
  }
  return v;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("repn_matrix formula cases") {
  const auto v = test_vector(kXi);
  SUBCASE("pure central element") {
    const auto M = repn_matrix(1.5, GroupElement(0, 0, 0.4), kXi);
    CHECK(max_abs(M.entries * v - std::polar(1.0, 2 * kPi * 1.5 * 0.4) * v) <
          1e-15);
  }
  SUBCASE("pure shift") {
    const auto M = repn_matrix(0.7, GroupElement(0, 1.25, 0), kXi);
    const Eigen::VectorXcd w = M.entries * v;
    for (long i = 0; i + 5 < kXi.n; ++i) CHECK(w(i) == v(i + 5));
  }
  SUBCASE("modulation") {
    const double lam = 0.8, x = 0.6;
    const auto M = repn_matrix(lam, GroupElement(x, 0, 0), kXi);
    const Eigen::VectorXcd w = M.entries * v;
    for (long i = 0; i < kXi.n; ++i)
      CHECK(std::abs(w(i) - std::polar(1.0, 2 * kPi * lam * x * kXi.xi(i)) * v(i)) <
            1e-15);
  }
  CHECK_THROWS_AS(repn_matrix(1.0, GroupElement(0, 0.1, 0), kXi), OffGridShift);
  CHECK_THROWS_AS(repn_matrix(0.0, GroupElement(0, 0, 0), kXi), DimensionMismatch);
}

TEST_CASE("unitarity on interior vectors") {
  Rng r(5);
  for (int trial = 0; trial < 20; ++trial) {
    const double lam = 2 * r.symmetric() + 0.01;
    const GroupElement g(3 * r.symmetric(), std::round(8 * r.symmetric()) / 4,
                         r.symmetric());
    const auto M = repn_matrix(lam, g, kXi);
    const auto v = test_vector(kXi);
    CHECK(std::abs((M.entries * v).norm() / v.norm() - 1) < 1e-12);
    // M^* M is the identity on the rows the shift keeps
    const Eigen::MatrixXcd P = M.entries.adjoint() * M.entries;
    const long s = grid_shift(g.y[0], 4);
    for (long i = std::max(0L, s); i < std::min(kXi.n, kXi.n + s); ++i)
      CHECK(std::abs(P(i, i) - 1.0) < 1e-12);
  }
}

TEST_CASE("homomorphism") {
  SUBCASE("hand case (1,0,0)(0,1,0) at lambda = 1") {
    const auto [prod, direct] = repn_compose_check(
        1.0, GroupElement(1, 0, 0), GroupElement(0, 1, 0), kXi);
    const auto ref = repn_matrix(1.0, GroupElement(1, 1, -0.5), kXi);
    CHECK(max_abs(prod.entries - ref.entries) < 1e-12);
    CHECK(max_abs(direct.entries - ref.entries) < 1e-12);
  }
  SUBCASE("seeded pairs, applied to interior vectors") {
    Rng r(9);
    const auto v = test_vector(kXi);
    for (int trial = 0; trial < 20; ++trial) {
      const double lam = r.symmetric() * 2 + 0.05;
      const GroupElement a(r.symmetric(), std::round(4 * r.symmetric()) / 4,
                           r.symmetric());
      const GroupElement b(r.symmetric(), std::round(4 * r.symmetric()) / 4,
                           r.symmetric());
      const auto [prod, direct] = repn_compose_check(lam, a, b, kXi);
      CHECK(max_abs(prod.entries * v - direct.entries * v) < 1e-12);
    }
  }
  SUBCASE("identity and inverse") {
    const GroupElement a(0.4, 0.75, -0.2);
    const auto [p1, d1] = repn_compose_check(0.9, a, GroupElement(0, 0, 0), kXi);
    CHECK(max_abs(p1.entries - d1.entries) == 0.0);
    const auto [p2, d2] = repn_compose_check(0.9, a, group_inv(a), kXi);
    const auto v = test_vector(kXi);
    CHECK(max_abs(p2.entries * v - v) < 1e-12);
    CHECK(max_abs(d2.entries - Eigen::MatrixXcd::Identity(kXi.n, kXi.n)) < 1e-15);
  }
  SUBCASE("central character is exact") {
    const auto M = repn_matrix(0.3, GroupElement(0, 0, 2), kXi);
    const cplx z = std::polar(1.0, 2 * kPi * 0.3 * 2);
    CHECK(max_abs(M.entries - z * Eigen::MatrixXcd::Identity(kXi.n, kXi.n)) == 0.0);
  }
}

TEST_CASE("monomial fast paths equal dense products") {
  Rng r(13);
  OperatorMatrix A = zero_operator(0.6, kXi);
  A.entries = Eigen::MatrixXcd::Random(kXi.n, kXi.n);
  const GroupElement g(0.35, -1.5, 0.2);
  const auto M = repn_matrix(0.6, g, kXi);
  CHECK(max_abs(repn_apply_left(g, A).entries - M.entries * A.entries) < 1e-13);
  CHECK(max_abs(repn_apply_right(A, g).entries - A.entries * M.entries) < 1e-13);
  CHECK(std::abs(repn_trace_adjoint(g, A) - trace(compose(adjoint(M), A))) < 1e-12);
}

TEST_CASE("grid helpers") {
  const XiGrid a{4, -3, 5}, b{4, 0, 10};
  const XiGrid u = union_grid(a, b);
  CHECK(u.i0 == -3);
  CHECK(u.n == 13);
  OperatorMatrix A = zero_operator(1.0, a);
  A.entries = Eigen::MatrixXcd::Random(5, 5);
  const auto B = regrid(A, u);
  CHECK(B.entries.block(0, 0, 5, 5) == A.entries);
  CHECK(regrid(B, a).entries == A.entries);
  CHECK_THROWS_AS(compose(A, B), DimensionMismatch);
}
