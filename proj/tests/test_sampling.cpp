// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include "heis/rng.hpp"
#include "heis/sampling.hpp"

using namespace heis;

namespace {

// x, y in [-4, 4), t in [-20, 20): room for |m| <= 8 central translates.
GridSpec v0_grid() { return GridSpec::uniform(4, 32, 20, 160); }

// dt = 1/8 keeps every lattice translate on the grid for q = qx = 4.
GridSpec general_grid() {
  GridSpec g;
  g.q = 4;
  g.qx = 4;
  g.Nx = 64;  // [-8, 8)
  g.Ny = 32;  // [-4, 4)
  g.T = 16;
  g.Nt = 256;
  return g;
}

// Shifted and modulated in t, so the symbol P_00 is not even.
Generator shifted() {
  return {"shifted", [](double x, double y, double t) {
            const double a = x * x + y * y + (t - 0.3) * (t - 0.3);
            return std::exp(-kPi * a) * std::polar(1.0, 2 * kPi * 0.1 * t);
          }};
}

CoeffArray seeded(int K, int Rkl, int Rm, unsigned seed) {
  Rng rng(seed);
  CoeffArray c(K);
  for (int k = -Rkl; k <= Rkl; ++k)
    for (int l = -Rkl; l <= Rkl; ++l)
      for (int m = -Rm; m <= Rm; ++m) c.at(k, l, m) = rng.cuniform();
  return c;
}

// Channel-wise alpha summed directly in group coordinates from the closed form.
cplx alpha_oracle(const CoeffArray& c, const Generator& G, int K, long k, long l, long m) {
  auto phi_at = [&](const LatticePoint& p) {
    const GroupElement x = p.embed();
    return G.eval(x.x[0], x.y[0], x.t);
  };
  auto in_box = [&](const LatticePoint& p) {
    return std::abs(p.k[0]) <= K && std::abs(p.l[0]) <= K && std::abs(p.m) <= K;
  };
  const LatticePoint p(k, l, m);
  cplx s = 0.0;
  for (long a = -K; a <= K; ++a)
    for (long b = -K; b <= K; ++b)
      for (long e = -K; e <= K; ++e) {
        const LatticePoint pp(a, b, e);
        const LatticePoint w = lattice_mul(p, lattice_inv(pp));
        if (!in_box(w)) continue;
        cplx g = 0.0;
        for (long mm = -K; mm <= K; ++mm) {
          const cplx cm = c.at(static_cast<int>(k), static_cast<int>(l), static_cast<int>(mm));
          if (cm != cplx(0.0))
            g += cm * phi_at(lattice_mul(lattice_inv(LatticePoint(k, l, mm)), w));
        }
        s += g * std::conj(phi_at(lattice_inv(pp)));
      }
  return s;
}

double interior_sup_rel(const SampledFunction& a, const SampledFunction& b, double tmax) {
  const GridSpec& g = a.grid;
  double e = 0.0, n = 0.0;
  for (int ix = 0; ix < g.Nx; ++ix)
    for (int iy = 0; iy < g.Ny; ++iy)
      for (int it = 0; it < g.Nt; ++it) {
        if (std::abs(g.t(it)) > tmax) continue;
        e = std::max(e, std::abs(a.at(ix, iy, it) - b.at(ix, iy, it)));
        n = std::max(n, std::abs(b.at(ix, iy, it)));
      }
  return e / n;
}

}  // namespace

TEST_CASE("p_symbol is the m-Fourier series of the samples") {
  LatticeSamples s(1);
  s.at(0, 0, 1) = 2.0;
  s.at(1, 0, -1) = cplx(0.0, 1.0);
  const std::vector<double> nodes = {0.1, 0.25, 0.6};
  const SymbolP P = p_symbol(s, nodes);
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    CHECK(std::abs(P.P0[a] - 2.0 * std::polar(1.0, 2 * kPi * nodes[a])) < 1e-15);
    CHECK(std::abs(P.at(1, 0)[a] - cplx(0.0, 1.0) * std::polar(1.0, -2 * kPi * nodes[a])) <
          1e-15);
    CHECK(P.norm2[a] == doctest::Approx(5.0));
  }
}

TEST_CASE("p_norm_check bounds the symbol on the mask and vanishes off it") {
  LatticeSamples s(1);
  s.at(0, 0, 0) = 1.0;
  s.at(0, 0, 1) = 1.0;  // |P_00|^2 = 2 + 2 cos(2 pi lambda), zero at 1/2
  const std::vector<double> nodes = {0.25, 0.5, 0.75};
  const SymbolP P = p_symbol(s, nodes);
  const PNormReport on = p_norm_check(P, {true, false, true}, 1e-8);
  CHECK(on.ok);
  CHECK(on.A_P == doctest::Approx(2.0));
  CHECK(on.B_P == doctest::Approx(2.0));
  CHECK(on.off_mask_max < 1e-12);
  CHECK_FALSE(p_norm_check(P, {true, true, true}, 1e-8).ok);
  CHECK_FALSE(p_norm_check(P, {false, false, false}, 1e-8).ok);
  CHECK(p_norm_check(P, {true, false, true}, 1e-8, true).A_P == doctest::Approx(2.0));
  CHECK_THROWS_AS(p_norm_check(P, {true}, 1e-8), DimensionMismatch);
}

TEST_CASE("discrete convolution with the identity delta is the identity") {
  LatticeSamples g(2), d(2);
  Rng rng(3);
  for (cplx& v : g.values) v = rng.cuniform();
  d.at(0, 0, 0) = 1.0;
  for (Lat p : {Lat{0, 0, 0}, Lat{1, -2, 2}, Lat{-2, 1, 0}})
    CHECK(discrete_convolve_lattice(g, d, p) == g.get(p));
  // a delta at q shifts by right multiplication with q^-1
  LatticeSamples dq(2);
  dq.at(1, 1, 0) = 1.0;
  const Lat p{0, 1, 1};
  CHECK(discrete_convolve_lattice(g, dq, p) == g.get(mul(p, inv(Lat{1, 1, 0}))));
}

TEST_CASE("lattice values and central samples") {
  const GridSpec g = v0_grid();
  const auto phi = sample(gaussian(), g);
  CHECK(lattice_value(phi, {0, 0, 1}).real() == doctest::Approx(std::exp(-kPi)));
  CHECK(lattice_value(phi, {0, 1, 0}).real() == doctest::Approx(std::exp(-kPi)));
  CHECK(lattice_value(phi, {1, 0, 0}).real() == doctest::Approx(std::exp(-4 * kPi)));
  CHECK(lattice_value(phi, {0, 0, 40}) == cplx(0.0));
  const LatticeSamples s = central_samples(phi, 8);
  CHECK(s.at(0, 0, 2) == lattice_value(phi, {0, 0, 2}));
  CHECK(s.at(1, 0, 0) == cplx(0.0));
  CHECK_THROWS_AS(central_samples(phi, 20), LatticeOutsideGrid);
}

TEST_CASE("alpha pipeline matches the direct group-coordinate sum") {
  const GridSpec g = general_grid();
  const Generator G = shifted();
  const auto phi = sample(G, g);
  const int K = 3;
  const CoeffArray c = seeded(K, 1, 2, 5);
  const CoeffArray alpha = alpha_coeffs(c, phi, K);
  double amax = 0.0, err = 0.0;
  for (int k = -1; k <= 1; ++k)
    for (int l = -1; l <= 1; ++l)
      for (int m = -K; m <= K; ++m) {
        const cplx o = alpha_oracle(c, G, K, k, l, m);
        amax = std::max(amax, std::abs(o));
        err = std::max(err, std::abs(alpha.at(k, l, m) - o));
      }
  CHECK(amax > 0.1);
  CHECK(err <= 1e-10 * amax);
  // channels without coefficients stay zero
  CHECK(alpha.at(2, 0, 0) == cplx(0.0));
}

TEST_CASE("V0 reconstruction from central samples, both dual modes") {
  const GridSpec g = v0_grid();
  const auto phi = sample(gaussian(), g);
  const int K = 8;
  const CoeffArray c = seeded(K, 0, K - 3, 7);
  const auto f = synthesize(phi, c);
  DualOptions ls;
  ls.setting = DualSetting::V0;
  DualOptions fd = ls;
  fd.mode = DualMode::FiberDivision;
  const DualGenerator dls = build_dual_generator(phi, K, ls);
  const DualGenerator dfd = build_dual_generator(phi, K, fd);
  for (const DualGenerator* d : {&dls, &dfd}) {
    const auto rec = sample_reconstruct_v0(central_samples(f, K), *d);
    CHECK(rel_l2_error(rec, f) < 1e-3);
    CHECK(interior_sup_rel(rec, f, K - 3) < 1e-3);
    CHECK(d->accepted);
    CHECK(d->A_P > 0.5);
    CHECK(d->test_residuals.size() == static_cast<std::size_t>(2 * (K - 3) + 1));
  }
  CHECK(dls.residual < 1e-10);
  CHECK(dfd.residual < 1e-5);
  CHECK(rel_l2_error(dfd.psi, dls.psi) < 1e-5);
  // the reported residual is the measured error of a test element
  const auto f1 = left_translate(phi, LatticePoint(0, 0, 1));
  const double e1 = rel_l2_error(sample_reconstruct_v0(central_samples(f1, K), dfd), f1);
  CHECK(e1 <= dfd.residual * (1 + 1e-9));
  CHECK(e1 >= 0.5 * dfd.residual);
}

TEST_CASE("sign validation picks +1 when the symbol is not even") {
  const auto phi = sample(shifted(), v0_grid());
  DualOptions o;
  o.mode = DualMode::FiberDivision;
  o.setting = DualSetting::V0;
  const DualGenerator d = build_dual_generator(phi, 8, o);
  CHECK(d.sigma == 1);
  CHECK(d.residual < 1e-5);
  CHECK(d.residual_other_sigma > 0.1);
  o.sigma = -1;
  const DualGenerator wrong = build_dual_generator(phi, 8, o);
  CHECK_FALSE(wrong.accepted);
}

TEST_CASE("general least-squares reconstruction from alpha") {
  const auto phi = sample(gaussian(), general_grid());
  const int K = 3;
  const DualGenerator d = build_dual_generator(phi, K);
  CHECK(d.accepted);
  CHECK(d.condition > 1.0);
  CHECK(d.coeffs.has_value());
  const CoeffArray c = seeded(K, 1, 0, 9);
  const auto f = synthesize(phi, c);
  CHECK(rel_l2_error(reconstruct(c, phi, d), f) < 1e-3);
}

TEST_CASE("dual construction failures") {
  const GridSpec g = v0_grid();
  CHECK_THROWS_AS(build_dual_generator(SampledFunction(g), 4), NoSupport);
  DualOptions o;
  o.setting = DualSetting::V0;
  o.cond_max = 1.0;
  CHECK_THROWS_AS(build_dual_generator(sample(gaussian(), g), 8, o), IllConditioned);
  o.cond_max = 1e12;
  o.m_margin = 9;
  CHECK_THROWS_AS(build_dual_generator(sample(gaussian(), g), 8, o), ConfigError);
}
