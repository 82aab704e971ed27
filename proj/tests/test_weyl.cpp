// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heis/weyl.hpp"

using namespace heis;

namespace {

GridSpec grid() {
  GridSpec g;
  g.Nx = g.Ny = 64;  // [-8, 8)
  g.T = 8;
  g.Nt = 128;
  return g;
}

Generator shifted_gaussian(double wx, double wy, double wt, double cx, double cy,
                           double ct) {
  return {"", [=](double x, double y, double t) {
            return gaussian(wx, wy, wt).eval(x - cx, y - cy, t - ct);
          }};
}

}  // namespace

TEST_CASE("t_fiber closed form and symmetry") {
  const auto g = grid();
  const auto f = sample(gaussian(1.0, 1.2, 1.0), g);
  for (double lam : {0.0, 0.5, -1.25}) {
    const auto h = t_fiber(f, lam);
    double err = 0;
    for (int ix = 0; ix < g.Nx; ++ix)
      for (int iy = 0; iy < g.Ny; ++iy) {
        const cplx ref =
            gaussian(1.0, 1.2, 1.0).eval(g.x(ix), g.y(iy), 0) * std::exp(-kPi * lam * lam);
        err = std::max(err, std::abs(h.at(ix, iy) - ref));
      }
    CHECK(err < 1e-10);
  }
  const auto a = t_fiber(f, 0.7), b = t_fiber(f, -0.7);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    CHECK(std::abs(std::conj(a.values[i]) - b.values[i]) < 1e-12);
  // beyond the t band the fiber is zero
  CHECK(t_fiber(f, 4.0).norm2() == 0.0);
}

TEST_CASE("weyl_kernel closed form for a separable Gaussian") {
  auto g = grid();
  g.qx = 8;  // pushes the x-alias ghost at 1/dx - |omega| out of reach
  g.Nx = 128;
  const auto f = sample(gaussian(1.0, 0.8, 1.0), g);
  const auto h = t_fiber(f, 0.0);  // e^{-pi x^2} e^{-pi (y/0.8)^2} * 1
  for (double lam : {0.5, 1.0}) {
    const auto K = weyl_kernel(h, lam);
    double err = 0;
    for (long i = 0; i < K.dim(); ++i)
      for (long j = 0; j < K.dim(); ++j) {
        const double xi = K.xi.xi(i), eta = K.xi.xi(j);
        const double d = (eta - xi) / 0.8, s = xi + eta;
        double ref = std::exp(-kPi * d * d) * std::exp(-kPi * lam * lam * s * s / 4);
        // outside the y grid and the x band the discrete kernel is zero
        if (std::abs(eta - xi) >= g.y_extent() || std::abs(lam * s / 2) >= 0.5 / g.dx())
          ref = 0;
        err = std::max(err, std::abs(K.entries(i, j) * double(g.q) - ref));
      }
    CHECK(err < 1e-10);
  }
  FiberFunction zero = h;
  for (auto& v : zero.values) v = 0;
  CHECK(hs_norm2(weyl_kernel(zero, 1.0)) == 0.0);
}

TEST_CASE("HS scaling identity") {
  const auto g = grid();
  const auto h = t_fiber(sample(gaussian(1.0, std::sqrt(2.0), 1.0), g), 0.0);
  for (double lam : {0.5, 1.0, 2.0, -1.0}) {
    const double r = std::sqrt(std::abs(lam) * hs_norm2(weyl_kernel(h, lam)) / h.norm2());
    CHECK(std::abs(r - 1) < 1e-6);
  }
}

TEST_CASE("hs_inner: symmetry and the inner-product identity") {
  const auto g = grid();
  const auto f = t_fiber(sample(shifted_gaussian(1.0, 1.4, 1, 0.3, -0.5, 0), g), 0.0);
  const auto h = t_fiber(sample(shifted_gaussian(1.1, 1.5, 1, -0.2, 0.25, 0), g), 0.0);
  cplx ref = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) ref += f.values[i] * std::conj(h.values[i]);
  ref *= g.dx() * g.dy();
  for (double lam : {0.5, 1.0, 2.0}) {
    KernelOptions o;
    o.xi = union_grid(auto_xi_grid(f, lam), auto_xi_grid(h, lam));
    const auto A = weyl_kernel(f, lam, o), B = weyl_kernel(h, lam, o);
    CHECK(std::abs(hs_inner(A, B) - std::conj(hs_inner(B, A))) < 1e-15);
    CHECK(hs_inner(A, A).real() >= 0);
    CHECK(std::abs(hs_inner(A, A) - hs_norm2(A)) < 1e-14);
    CHECK(std::abs(lam * hs_inner(A, B) - ref) < 1e-6 * std::abs(ref));
  }
}

TEST_CASE("group_ft: central translate and linearity") {
  const auto g = grid();
  const auto f = sample(gaussian(), g);
  const auto f1 = left_translate(f, LatticePoint(0, 0, 1));
  const double lam = 0.6;
  KernelOptions o;
  o.xi = symmetric_xi_grid(4, 8.0);
  const auto A = group_ft(f1, lam, o), B = group_ft(f, lam, o);
  CHECK(rel_hs_error(A, OperatorMatrix{lam, B.xi, B.entries * std::polar(1.0, 2 * kPi * lam),
                                       OperatorKind::IntegralKernel}) < 1e-10);
  const auto h = sample(shifted_gaussian(0.9, 1, 1, 0.5, 0.25, 0.5), g);
  const cplx a(1, 2), b(-0.5, 0.3);
  const auto mix = axpy(a, f, scaled(b, h));
  o.centre = 0.0;
  const auto lhs = group_ft(mix, lam, o);
  Eigen::MatrixXcd rhs = a * group_ft(f, lam, o).entries + b * group_ft(h, lam, o).entries;
  CHECK((lhs.entries - rhs).norm() < 1e-12 * rhs.norm());
  // automatic centres: deviation bounded by the band-edge content e^{-pi W^2}
  o.centre.reset();
  const auto lhs_auto = group_ft(mix, lam, o);
  rhs = a * group_ft(f, lam, o).entries + b * group_ft(h, lam, o).entries;
  CHECK((lhs_auto.entries - rhs).norm() < 1e-4 * rhs.norm());
}

TEST_CASE("group_ft matches the direct Bochner quadrature on a test vector") {
  GridSpec g = grid();
  g.Nx = g.Ny = 40;  // [-5, 5)
  g.T = 5;
  g.Nt = 80;
  const auto f = sample(shifted_gaussian(1, 1, 1, 0.25, 0, 0.1), g);
  const double lam = 0.8;
  const auto A = group_ft(f, lam);
  auto v = [](double s) { return std::exp(-kPi * (s - 0.2) * (s - 0.2) / 2); };
  Eigen::VectorXcd vv(A.dim());
  for (long i = 0; i < A.dim(); ++i) vv(i) = v(A.xi.xi(i));
  const Eigen::VectorXcd w = A.entries * vv;
  double err = 0, scale = 0;
  for (long i = 0; i < A.dim(); i += 7) {
    const double xi = A.xi.xi(i);
    if (std::abs(xi) > 3) continue;
    cplx ref = 0;
    for (int ix = 0; ix < g.Nx; ++ix)
      for (int iy = 0; iy < g.Ny; ++iy)
        for (int it = 0; it < g.Nt; ++it) {
          const double x = g.x(ix), y = g.y(iy), t = g.t(it);
          ref += f.at(ix, iy, it) * std::polar(1.0, 2 * kPi * lam * (t + x * xi + 0.5 * x * y)) *
                 v(xi + y);
        }
    ref *= g.cell();
    err = std::max(err, std::abs(w(i) - ref));
    scale = std::max(scale, std::abs(ref));
  }
  CHECK(err < 1e-6 * scale);
}

TEST_CASE("lambda grid and Plancherel") {
  const auto lg = make_lambda_grid(4, 1.0 / 32);
  CHECK(lg.nodes.size() == 256);
  double w = 0;
  for (std::size_t i = 0; i < lg.nodes.size(); ++i) {
    CHECK(lg.nodes[i] != 0.0);
    CHECK(lg.weights[i] > 0.0);
    CHECK(lg.nodes[i] == -lg.nodes[lg.nodes.size() - 1 - i]);
    w += lg.weights[i];
  }
  CHECK(std::abs(w / 16.0 - 1) < 1e-6);  // integral of |lambda| over [-4, 4]
  const auto g = grid();
  const auto f = sample(gaussian(), g);
  const auto coarse = make_lambda_grid(4, 1.0 / 8);
  CHECK(plancherel_norm(SampledFunction(g), coarse) == 0.0);
  const double p = plancherel_norm(f, coarse);
  CHECK(std::abs(plancherel_norm(scaled(cplx(0, -3), f), coarse) - 3 * p) < 1e-12 * p);
  CHECK(std::abs(p / std::sqrt(f.norm2()) - 1) < 1e-4);
}
