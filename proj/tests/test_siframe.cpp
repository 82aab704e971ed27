// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "heis/rng.hpp"
#include "heis/siframe.hpp"

using namespace heis;

namespace {

// q = qx = 8 and dt = 1/16 keep every lattice t-shift on the grid and the
// xi spacing fine enough for |k| <= 1 channel phases.
GridSpec fine_grid() {
  GridSpec g;
  g.q = 8;
  g.qx = 8;
  g.Nx = 64;  // [-4, 4)
  g.Ny = 64;  // [-4, 4)
  g.T = 6;
  g.Nt = 192;
  return g;
}

// Complex and asymmetric in t, so sign and conjugation conventions show.
Generator chirped() {
  return {"chirped", [](double x, double y, double t) {
            const double a = x * x + 1.3 * y * y + (t - 0.2) * (t - 0.2);
            return std::exp(-kPi * a) * std::polar(1.0, 2 * kPi * (0.3 * x + 0.2 * t)) *
                   cplx(1.0, 0.4 * y);
          }};
}

}  // namespace

TEST_CASE("weights of the zero function vanish") {
  const SampledFunction zero(fine_grid());
  CHECK(weight_G_operator(zero, 1, 0, 0.5) == cplx(0.0));
  CHECK(weight_G_kernel(zero, 1, -1, 0.5) == cplx(0.0));
  const auto rep = condition_c(zero, 1, 0.0, unit_interval_nodes(4));
  CHECK(rep.ok);
  CHECK(rep.max_violation == 0.0);
}

TEST_CASE("G_00 is real and nonnegative, and the r-sum tail is negligible") {
  const auto phi = sample(gaussian(), fine_grid());
  for (double lam : {0.125, 0.5, 0.875}) {
    const cplx g = weight_G_operator(phi, 0, 0, lam);
    CHECK(std::abs(g.imag()) < 1e-14 * std::abs(g));
    CHECK(g.real() > 0.0);
    CHECK(std::abs(weight_G_kernel(phi, 0, 0, lam) - g) < 1e-12 * std::abs(g));
  }
  WeightOptions four;
  four.R = 4;
  four.stop_rel = 0.0;
  WeightOptions eight;
  eight.stop_rel = 0.0;
  const cplx a = weight_G_kernel(phi, 0, 1, 0.5, four);
  const cplx b = weight_G_kernel(phi, 0, 1, 0.5, eight);
  CHECK(std::abs(a - b) <= 1e-6 * std::abs(b));
}

TEST_CASE("operator and kernel forms agree") {
  const auto phi = sample(chirped(), fine_grid());
  const auto nodes = unit_interval_nodes(4);
  const auto op = weight_table(phi, 1, nodes, WeightForm::Operator);
  const auto ker = weight_table(phi, 1, nodes, WeightForm::Kernel);
  for (const auto& [kl, v] : op.values)
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      const cplx w = ker.at(kl.first, kl.second)[a];
      CHECK(std::abs(v[a] - w) <= 1e-10 * std::abs(v[a]));
    }
  // single-point entry points match the table
  CHECK(std::abs(weight_G_operator(phi, 1, -1, nodes[2]) - op.at(1, -1)[2]) <
        1e-14 * std::abs(op.at(1, -1)[2]));
  CHECK(std::abs(weight_G_kernel(phi, -1, 1, nodes[1]) - ker.at(-1, 1)[1]) <
        1e-14 * std::abs(ker.at(-1, 1)[1]));
}

TEST_CASE("m-Fourier coefficients of G match translate inner products") {
  // int_0^1 G_{k,l}(lam) e^{-2 pi i m lam} dlam = <phi, L_(2k,l,m) phi>
  const auto phi = sample(chirped(), fine_grid());
  const int NG = 8;
  const auto nodes = unit_interval_nodes(NG);
  const auto tab = weight_table(phi, 1, nodes, WeightForm::Kernel);
  TranslateTable tt(phi);
  double worst = 0.0;
  for (int k = -1; k <= 1; ++k)
    for (int l = -1; l <= 1; ++l)
      for (int m = -2; m <= 2; ++m) {
        cplx c = 0.0;
        for (int a = 0; a < NG; ++a)
          c += tab.at(k, l)[a] * std::polar(1.0 / NG, -2 * kPi * m * nodes[a]);
        worst = std::max(worst, std::abs(c - tt({k, l, m})) / phi.norm2());
      }
  CHECK(worst < 1e-6);
}

TEST_CASE("Condition C") {
  const auto nodes = unit_interval_nodes(4);
  const auto gauss = sample(gaussian(), fine_grid());
  const double eps = 1e-8 * gauss.norm2();
  const auto rg = condition_c(gauss, 1, eps, nodes);
  CHECK_FALSE(rg.ok);
  CHECK(rg.max_violation > 0.01 * gauss.norm2());
  CHECK(condition_c(gauss, 1, std::numeric_limits<double>::infinity(), nodes).ok);
  // Translates of a one-cell bump with distinct (k,l) never overlap. The
  // Fourier-side residual is band-window leakage of a non-analytic bump.
  GridSpec g = fine_grid();
  g.q = g.qx = 4;
  g.Nx = g.Ny = 32;
  g.Nt = 96;  // dt = 1/8
  const auto bump = sample(cell_bump(), g);
  const auto rb = condition_c(bump, 1, 1e-5 * bump.norm2(), nodes);
  CHECK(rb.ok);
}

TEST_CASE("Gram matrix: diagonal, Hermitian, PSD, offsets") {
  const auto phi = sample(chirped(), fine_grid());
  const auto G = gram_matrix(phi, 1);
  CHECK(G.entries.rows() == 27);
  CHECK(G.hermitian_error < 1e-12);
  for (long i = 0; i < G.entries.rows(); ++i)
    CHECK(std::abs(G.entries(i, i) - phi.norm2()) < 1e-10);
  const Eigen::MatrixXcd H = 0.5 * (G.entries + G.entries.adjoint());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8 * es.eigenvalues().maxCoeff());
  // entry (p, p') against a dense inner product of two translates
  const auto pts = box_points(1);
  const long i = 4, j = 20;
  const auto a = left_translate(phi, LatticePoint(pts[i].k, pts[i].l, pts[i].m));
  const auto b = left_translate(phi, LatticePoint(pts[j].k, pts[j].l, pts[j].m));
  CHECK(std::abs(G.entries(i, j) - inner(a, b)) < 1e-12);
}

TEST_CASE("gram_matrix refuses a box that leaves the grid") {
  GridSpec g;
  g.Nx = g.Ny = 32;  // [-4, 4)
  g.T = 4;
  g.Nt = 64;
  const auto phi = sample(gaussian(), g);
  CHECK_THROWS_AS(gram_matrix(phi, 3), TranslateOutOfBand);
}

TEST_CASE("frame_bounds on fixed matrices") {
  const int K = 1;
  const long N = 27;
  auto id = gram_from_matrix(Eigen::MatrixXcd::Identity(N, N), K);
  auto r = frame_bounds(id, 1e-10);
  CHECK(r.A_est == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.B_est == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.rank == N);
  r = frame_bounds(gram_from_matrix(2.0 * Eigen::MatrixXcd::Identity(N, N), K), 1e-10);
  CHECK(r.A_est == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.B_est == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.A_est <= r.B_est);
}

TEST_CASE("frame_bounds scales with the generator and bounds G_00") {
  const auto phi = sample(gaussian(), fine_grid());
  const auto nodes = unit_interval_nodes(8);
  const auto G00 = weight_G00(phi, nodes);
  const auto r = frame_bounds(gram_matrix(phi, 1), 1e-10, G00, 1e-8);
  const auto r3 = frame_bounds(gram_matrix(scaled(3.0, phi), 1), 1e-10);
  CHECK(r3.A_est == doctest::Approx(9.0 * r.A_est).epsilon(1e-10));
  CHECK(r3.B_est == doctest::Approx(9.0 * r.B_est).epsilon(1e-10));
  CHECK(r.A_est <= r.B_est);
  CHECK(r.bessel_ok);
  CHECK(r.frame_ok);
  // necessary directions: truncated spectra enclose the G_00 range
  CHECK(r.A_est <= r.G00_min * (1 + 1e-6));
  CHECK(r.G00_max <= r.B_est * 1.1);
  CHECK(r.bessel_verdict == "necessary-only");
  for (bool b : r.omega) CHECK(b);
}

TEST_CASE("frame_bounds match G_00 for a Condition-C generator") {
  GridSpec g;
  g.Nx = 64;  // [-8, 8)
  g.Ny = 48;  // [-6, 6)
  g.T = 12;
  g.Nt = 192;
  const auto phi = sample(cell_bump(), g);
  const auto G00 = weight_G00(phi, unit_interval_nodes(16));
  const auto r = frame_bounds(gram_matrix(phi, 3), 1e-10, G00, 1e-8);
  CHECK(r.rel_gap_A <= 0.1);
  CHECK(r.rel_gap_B <= 0.1);
  CHECK(r.bounds_agree);
}

TEST_CASE("canonical dual coefficients") {
  const int K = 1;
  const long N = 27;
  Rng rng(7);
  CoeffArray c(K);
  for (auto& v : c.values) v = rng.cuniform();
  const auto id = gram_from_matrix(Eigen::MatrixXcd::Identity(N, N), K);
  const auto same = canonical_dual_coeffs(id, c);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(same.values[i] == c.values[i]);
  CHECK_THROWS_AS(canonical_dual_coeffs(gram_from_matrix(Eigen::MatrixXcd::Zero(N, N), K), c),
                  SingularGram);

  // f = sum c_p L_p phi; coefficients <f, S^-1 L_p phi> resynthesize f.
  const auto phi = sample(chirped(), fine_grid());
  const auto G = gram_matrix(phi, K);
  const auto f = synthesize(phi, c);
  CoeffArray analysis(K);  // <f, L_p phi>
  const auto pts = box_points(K);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto tr = left_translate(phi, LatticePoint(pts[i].k, pts[i].l, pts[i].m));
    analysis.values[i] = inner(f, tr);
  }
  const auto d = canonical_dual_coeffs(G, analysis);
  CHECK(rel_l2_error(synthesize(phi, d), f) < 1e-10);
  // inverse consistency: target = (T^*T) c returns c when full rank
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(d.values[i] - c.values[i]) < 1e-8);
}

TEST_CASE("omega support") {
  const auto nodes = unit_interval_nodes(4);
  for (bool b : omega_support({1, 1, 1, 1}, 1e-8)) CHECK(b);
  for (bool b : omega_support({0, 0, 0, 0}, 1e-8)) CHECK_FALSE(b);
  const std::vector<double> G = {0.5, 1e-9, 0.2, 0.0};
  const auto lo = omega_support(G, 1e-10), hi = omega_support(G, 0.3);
  for (std::size_t i = 0; i < G.size(); ++i) CHECK((!hi[i] || lo[i]));
  CHECK(omega_at(lo, nodes, nodes[2] + 3.0) == lo[2]);
  CHECK(omega_at(lo, nodes, nodes[0] - 5.0) == lo[0]);
}

TEST_CASE("CSV exports") {
  const auto phi = sample(gaussian(), fine_grid());
  const auto tab = weight_table(phi, 0, unit_interval_nodes(2), WeightForm::Kernel);
  const std::string path = "siframe_weights_test.csv";
  write_weight_csv(tab, path);
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "k,l,lambda,re,im");
  CHECK(row.rfind("0,0,0.25,", 0) == 0);
  std::remove(path.c_str());
  FrameReport r;
  write_frame_report_csv(r, path);
  std::ifstream in2(path);
  std::getline(in2, header);
  CHECK(header == "key,value");
  std::remove(path.c_str());
}
