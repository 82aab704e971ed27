// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "heis/core.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {

GroupElement random_element(Rng& r) {
  return GroupElement(3 * r.symmetric(), 3 * r.symmetric(), 3 * r.symmetric());
}

double dist(const GroupElement& a, const GroupElement& b) {
  double d = std::abs(a.t - b.t);
  for (int i = 0; i < a.n(); ++i)
    d = std::max({d, std::abs(a.x[i] - b.x[i]), std::abs(a.y[i] - b.y[i])});
  return d;
}

// Small grid holding a unit Gaussian with ample margin: x,y in [-6,6),
// t in [-8,8), spacing 1/4 and 1/8.
GridSpec small_grid() {
  GridSpec g;
  g.q = g.qx = 4;
  g.Nx = g.Ny = 48;
  g.T = 8;
  g.Nt = 128;
  return g;
}

}  // namespace

TEST_CASE("group law: identity, hand value, inverse") {
  const GroupElement e = GroupElement::identity(1);
  const GroupElement a(0.3, -1.2, 2.5);
  CHECK(dist(group_mul(e, a), a) == 0.0);
  const GroupElement p = group_mul(GroupElement(1, 0, 0), GroupElement(0, 1, 0));
  CHECK(p.x[0] == 1.0);
  CHECK(p.y[0] == 1.0);
  CHECK(p.t == -0.5);
  const GroupElement i = group_inv(GroupElement(1, 2, 3));
  CHECK(i.x[0] == -1.0);
  CHECK(i.y[0] == -2.0);
  CHECK(i.t == -3.0);
  CHECK(dist(group_inv(group_inv(a)), a) == 0.0);
}

TEST_CASE("group law: seeded associativity and inverse") {
  Rng r(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_element(r), b = random_element(r),
               c = random_element(r);
    CHECK(dist(group_mul(group_mul(a, b), c), group_mul(a, group_mul(b, c))) <
          1e-12);
    CHECK(dist(group_mul(a, group_inv(a)), GroupElement::identity(1)) < 1e-15);
  }
}

TEST_CASE("group law for n = 2") {
  const GroupElement a({1, 2}, {0, -1}, 0.5), b({0, 1}, {3, 1}, -1);
  // t = 0.5 - 1 + (u.y - v.x)/2 with u=(0,1), v=(3,1): u.y = -1, v.x = 5
  CHECK(group_mul(a, b).t == doctest::Approx(0.5 - 1 + 0.5 * (-1 - 5)));
  CHECK(dist(group_mul(a, group_inv(a)), GroupElement::identity(2)) == 0.0);
}

TEST_CASE("lattice products embed exactly into the group") {
  Rng r(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto ri = [&] { return static_cast<long>(std::floor(9 * r.uniform())) - 4; };
    const LatticePoint p(ri(), ri(), ri()), q(ri(), ri(), ri());
    const GroupElement g = group_mul(p.embed(), q.embed());
    CHECK(dist(g, lattice_mul(p, q).embed()) == 0.0);
    CHECK(lattice_mul(p, lattice_inv(p)) == LatticePoint(0, 0, 0));
    const Lat a = to_lat(p), b = to_lat(q);
    CHECK(mul(a, b) == to_lat(lattice_mul(p, q)));
  }
}

TEST_CASE("grid validation") {
  GridSpec g = small_grid();
  CHECK_NOTHROW(g.validate());
  g.Nt = 127;
  CHECK_THROWS_AS(g.validate(), GridMismatch);
  g = small_grid();
  g.T = 7.3;
  CHECK_THROWS_AS(g.validate(), GridMismatch);
  g = small_grid();
  g.n = 2;
  CHECK_THROWS_AS(g.validate(), GridMismatch);
}

TEST_CASE("left_translate basics") {
  const GridSpec g = small_grid();
  const SampledFunction f = sample(gaussian(), g);
  SUBCASE("identity") {
    const auto t = left_translate(f, LatticePoint(0, 0, 0));
    CHECK(rel_l2_error(t, f) == 0.0);
  }
  SUBCASE("central shift is a pure t-shift") {
    const auto t = left_translate(f, LatticePoint(0, 0, 2));
    const auto ref = sample(
        {"", [](double x, double y, double s) {
           return gaussian().eval(x, y, s - 2);
         }},
        g);
    CHECK(rel_l2_error(t, ref) < 1e-14);
  }
  SUBCASE("matches the closed form and preserves the norm") {
    for (Lat p : {Lat{1, 0, 0}, Lat{0, 1, -1}, Lat{1, -1, 1}, Lat{-1, 2, 0}}) {
      const auto t = left_translate(f, LatticePoint(p.k, p.l, p.m));
      const auto ref = sample(
          {"", [p](double x, double y, double s) {
             return gaussian().eval(x - 2 * p.k, y - p.l,
                                    s - p.m + p.k * y - 0.5 * p.l * x);
           }},
          g);
      CHECK(rel_l2_error(t, ref) < 1e-12);
      CHECK(std::abs(std::sqrt(t.norm2() / f.norm2()) - 1) < 1e-10);
    }
  }
  SUBCASE("composition") {
    const Lat p{1, 1, 0}, pp{-1, 1, 1};
    const auto a = left_translate(left_translate(f, LatticePoint(p.k, p.l, p.m)),
                                  LatticePoint(pp.k, pp.l, pp.m));
    const Lat c = mul(pp, p);
    const auto b = left_translate(f, LatticePoint(c.k, c.l, c.m));
    CHECK(rel_l2_error(a, b) < 1e-10);
  }
  SUBCASE("guard fires when the grid is too small") {
    CHECK_THROWS_AS(left_translate(f, LatticePoint(3, 0, 0)),
                    TranslateOutOfBand);
  }
}

TEST_CASE("left_translate interpolates off-grid t-shifts") {
  GridSpec g = small_grid();
  g.qx = 8;
  g.Nx = 96;  // x spacing 1/8 makes l*x/2 a multiple of 1/16
  const SampledFunction f = sample(gaussian(), g);
  const Lat p{0, 1, 0};
  CHECK_FALSE(LatticeShift(g, p).exact_everywhere());
  const auto t = left_translate(f, LatticePoint(p.k, p.l, p.m));
  const auto ref = sample(
      {"", [p](double x, double y, double s) {
         return gaussian().eval(x - 2 * p.k, y - p.l,
                                s - p.m + p.k * y - 0.5 * p.l * x);
       }},
      g);
  CHECK(rel_l2_error(t, ref) < 1e-10);
}

TEST_CASE("sparse accumulation equals dense translation") {
  const GridSpec g = small_grid();
  const SampledFunction f = sample(gaussian(), g);
  CoeffArray c(1);
  Rng r(3);
  for (auto& v : c.values) v = r.cuniform();
  SampledFunction dense(g);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Lat p = c.point(i);
    TranslateOptions loose;
    loose.max_mass_loss = 1.0;
    dense = axpy(c.values[i], left_translate(f, LatticePoint(p.k, p.l, p.m), loose),
                 dense);
  }
  TranslateOptions loose;
  loose.max_mass_loss = 1.0;
  CHECK(rel_l2_error(synthesize(f, c, loose), dense) < 1e-15);
}

TEST_CASE("translate_inner matches dense inner products") {
  const GridSpec g = small_grid();
  const SampledFunction f = sample(gaussian(), g);
  const SparseFunction s = sparsify(f);
  for (Lat q : {Lat{0, 0, 0}, Lat{0, 0, 1}, Lat{1, 1, 0}, Lat{-1, 0, 2}}) {
    const cplx a = translate_inner(s, f, q);
    const cplx b = inner(f, left_translate(f, LatticePoint(q.k, q.l, q.m)));
    CHECK(std::abs(a - b) < 1e-15);
  }
  // <phi, L_(0,0,m) phi> = 2^{-3/2} exp(-pi m^2 / 2) for the unit Gaussian.
  CHECK(std::abs(translate_inner(s, f, {0, 0, 1}).real() -
                 std::pow(2.0, -1.5) * std::exp(-kPi / 2)) < 1e-10);
}

TEST_CASE("tilde") {
  const GridSpec g = small_grid();
  const SampledFunction f = sample(gaussian(), g);
  CHECK(rel_l2_error(tilde(f), f) < 1e-30);  // real, even (edge layer ~0)
  SampledFunction h = sample(
      {"", [](double x, double y, double t) {
         return cplx(x, t) * gaussian(1.3).eval(x - .5, y, t + .25);
       }},
      g);
  // zero the first index layers, which tilde cannot reach
  for (int ix = 0; ix < g.Nx; ++ix)
    for (int iy = 0; iy < g.Ny; ++iy)
      for (int it = 0; it < g.Nt; ++it)
        if (ix == 0 || iy == 0 || it == 0) h.at(ix, iy, it) = 0;
  CHECK(rel_l2_error(tilde(tilde(h)), h) == 0.0);
  const auto th = tilde(h);
  CHECK(th.at(g.Nx / 2, g.Ny / 2, g.Nt / 2) ==
        std::conj(h.at(g.Nx / 2, g.Ny / 2, g.Nt / 2)));
}

TEST_CASE("sample_at_lattice") {
  const auto s = sample_at_lattice(gaussian(), 1);
  CHECK(s.at(0, 0, 0) == cplx(1.0));
  CHECK(s.at(1, 0, 0).real() == doctest::Approx(std::exp(-4 * kPi)).epsilon(1e-14));
  const GridSpec g = small_grid();
  const auto grid_s = sample_at_lattice(sample(gaussian(), g), 1);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(std::abs(grid_s.values[i] - s.values[i]) < 1e-12);
  CHECK_THROWS_AS(sample_at_lattice(sample(gaussian(), g), 3), LatticeOutsideGrid);
  LatticeArray a(2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Lat p = a.point(i);
    CHECK(a.index(p.k, p.l, p.m) == i);
  }
}

TEST_CASE("group_convolve: bilinearity and zero") {
  GridSpec g;
  g.q = g.qx = 4;
  g.Nx = g.Ny = 32;
  g.T = 4;
  g.Nt = 64;
  const auto f = sample(gaussian(0.7, 0.8, 0.9), g);
  const auto h = sample(gaussian(0.6), g);
  const auto fh = group_convolve(f, h);
  CHECK(rel_l2_error(group_convolve(scaled(cplx(2, -1), f), h),
                     scaled(cplx(2, -1), fh)) < 1e-13);
  CHECK(group_convolve(f, SampledFunction(g)).norm2() == 0.0);
  GridSpec other = g;
  other.Nt = 32;
  CHECK_THROWS_AS(group_convolve(f, SampledFunction(other)), GridMismatch);
}

TEST_CASE("group_convolve against direct quadrature at sample points") {
  GridSpec g;
  g.q = g.qx = 4;
  g.Nx = g.Ny = 32;
  g.T = 4;
  g.Nt = 64;
  const Generator F = gaussian(0.7, 0.8, 0.9), G = gaussian(0.6);
  const auto fh = group_convolve(sample(F, g), sample(G, g));
  // Direct sum over w, s of f((z,t)(-w,-s)) g(w,s) with closed-form f.
  for (auto [ix, iy, it] : {std::array<int, 3>{16, 16, 32},
                            std::array<int, 3>{18, 13, 36},
                            std::array<int, 3>{12, 19, 27}}) {
    const double x = g.x(ix), y = g.y(iy), t = g.t(it);
    cplx ref = 0;
    for (int a = 0; a < g.Nx; ++a)
      for (int b = 0; b < g.Ny; ++b)
        for (int c = 0; c < g.Nt; ++c) {
          const double u = g.x(a), v = g.y(b), s = g.t(c);
          ref += F.eval(x - u, y - v, t - s + 0.5 * (v * x - u * y)) *
                 G.eval(u, v, s);
        }
    ref *= g.cell();
    CHECK(std::abs(fh.at(ix, iy, it) - ref) < 1e-10 * std::abs(ref) + 1e-14);
  }
}

TEST_CASE("tensor round trip and CSV slice") {
  const GridSpec g = small_grid();
  SampledFunction f = sample(gaussian(), g);
  f.at(3, 4, 5) = cplx(0.25, -7);
  const std::string path = "test_core_tensor.bin";
  write_tensor(f, path);
  const auto h = read_tensor(path);
  CHECK(h.grid == g);
  CHECK(h.values == f.values);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_tensor("does-not-exist.bin"), IoError);
  write_csv_slice(f, g.Nt / 2, "test_core_slice.csv");
  std::remove("test_core_slice.csv");
}
