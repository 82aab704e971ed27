// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#include "heis/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "heis/flambda.hpp"
#include "heis/rng.hpp"
#include "heis/sampling.hpp"
#include "heis/siframe.hpp"

namespace heis {

namespace {

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", v);
  return b;
}

CriterionResult make(int id, std::string name, double value, double tol, bool side_ok = true,
                     std::string detail = "") {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.value = value;
  r.tol = tol;
  r.pass = side_ok && value <= tol;  // NaN fails
  r.detail = std::move(detail);
  return r;
}

GridSpec grid(int q, int qx, int Nx, int Ny, double T, int Nt) {
  GridSpec g;
  g.q = q;
  g.qx = qx;
  g.Nx = Nx;
  g.Ny = Ny;
  g.T = T;
  g.Nt = Nt;
  g.validate();
  return g;
}

double gdist(const GroupElement& a, const GroupElement& b) {
  double d = std::abs(a.t - b.t);
  for (int i = 0; i < a.n(); ++i)
    d = std::max({d, std::abs(a.x[i] - b.x[i]), std::abs(a.y[i] - b.y[i])});
  return d;
}

GroupElement random_element(Rng& r) {
  return GroupElement(4 * r.symmetric(), 4 * r.symmetric(), 4 * r.symmetric());
}

// q-aligned y so that the representation is an exact shift on the xi grid.
GroupElement random_aligned(Rng& r, int q) {
  return GroupElement(r.symmetric(), std::round(q * r.symmetric()) / q, r.symmetric());
}

Eigen::VectorXcd interior_vector(const XiGrid& xi) {
  Eigen::VectorXcd v(xi.n);
  for (long i = 0; i < xi.n; ++i) {
    const double s = xi.xi(i) - 0.3;
    v(i) = std::exp(-kPi * s * s) * std::polar(1.0, 0.7 * s);
  }
  return v;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

CoeffArray seeded(int K, int Rkl, int Rm, std::uint64_t seed) {
  Rng rng(seed);
  CoeffArray c(K);
  for (int k = -Rkl; k <= Rkl; ++k)
    for (int l = -Rkl; l <= Rkl; ++l)
      for (int m = -Rm; m <= Rm; ++m) c.at(k, l, m) = rng.cuniform();
  return c;
}

// ---------------------------------------------------------------- criteria

CriterionResult c1_algebra(std::uint64_t seed) {
  Rng r(seed);
  double assoc = 0.0, inverse = 0.0, lattice = 0.0;
  for (int i = 0; i < 200; ++i) {
    const GroupElement a = random_element(r), b = random_element(r), c = random_element(r);
    assoc = std::max(assoc, gdist(group_mul(group_mul(a, b), c), group_mul(a, group_mul(b, c))));
    inverse = std::max(inverse, gdist(group_mul(a, group_inv(a)), GroupElement::identity(1)));
    const LatticePoint p(static_cast<long>(std::lround(5 * r.symmetric())),
                         static_cast<long>(std::lround(5 * r.symmetric())),
                         static_cast<long>(std::lround(5 * r.symmetric())));
    const LatticePoint s(static_cast<long>(std::lround(5 * r.symmetric())),
                         static_cast<long>(std::lround(5 * r.symmetric())),
                         static_cast<long>(std::lround(5 * r.symmetric())));
    lattice = std::max(lattice, gdist(lattice_mul(p, s).embed(), group_mul(p.embed(), s.embed())));
  }
  const double hand_group =
      gdist(group_mul(GroupElement(1, 0, 0), GroupElement(0, 1, 0)), GroupElement(1, 1, -0.5));

  const XiGrid xi = symmetric_xi_grid(4, 10.0);
  const Eigen::VectorXcd v = interior_vector(xi);
  double unitary = 0.0, homo = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double lam = 2 * r.symmetric() + 0.01;
    const GroupElement g = random_aligned(r, xi.q);
    const OperatorMatrix M = repn_matrix(lam, g, xi);
    unitary = std::max(unitary, std::abs((M.entries * v).norm() / v.norm() - 1.0));
    const GroupElement a = random_aligned(r, xi.q), b = random_aligned(r, xi.q);
    const auto [prod, direct] = repn_compose_check(lam, a, b, xi);
    homo = std::max(homo, max_abs(prod.entries * v - direct.entries * v));
  }
  const auto [hp, hd] =
      repn_compose_check(1.0, GroupElement(1, 0, 0), GroupElement(0, 1, 0), xi);
  const OperatorMatrix href = repn_matrix(1.0, GroupElement(1, 1, -0.5), xi);
  const double hand_repn = std::max(max_abs(hp.entries - href.entries),
                                    max_abs(hd.entries - href.entries));
  const double worst = std::max({assoc, inverse, lattice, hand_group, unitary, homo, hand_repn});
  return make(1, "group and representation algebra", worst, 1e-12, true,
              "assoc=" + sci(assoc) + " inverse=" + sci(inverse) + " lattice=" + sci(lattice) +
                  " unitary=" + sci(unitary) + " homomorphism=" + sci(homo) +
                  " hand=" + sci(std::max(hand_group, hand_repn)));
}

CriterionResult c2_plancherel() {
  const GridSpec g = grid(4, 4, 64, 64, 8, 128);
  const SampledFunction f = sample(gaussian(), g);
  const double p = plancherel_norm(f, make_lambda_grid(4.0, 1.0 / 32));
  const double ratio = p / std::sqrt(f.norm2());
  return make(2, "Plancherel ratio", std::abs(ratio - 1.0), 1e-4, true, "ratio=" + sci(ratio));
}

CriterionResult c3_hs_scaling() {
  const GridSpec g = grid(4, 4, 64, 64, 8, 128);
  const FiberFunction h = t_fiber(sample(gaussian(1.0, std::sqrt(2.0), 1.0), g), 0.0);
  double worst = 0.0;
  std::string detail;
  for (double lam : {0.5, 1.0, 2.0}) {
    const double r = std::sqrt(std::abs(lam) * hs_norm2(weyl_kernel(h, lam)) / h.norm2());
    worst = std::max(worst, std::abs(r - 1.0));
    detail += "lambda=" + sci(lam) + ":" + sci(r - 1.0) + " ";
  }
  return make(3, "HS scaling of the Weyl transform", worst, 1e-6, true, detail);
}

CriterionResult c4_convolution() {
  // dx = dy = 1/6 keeps the kernel quadrature error below 1e-9
  const GridSpec g = grid(6, 6, 60, 60, 5, 80);
  const SampledFunction f = sample(gaussian(0.7, 0.8, 0.9), g), h = sample(gaussian(0.6), g);
  const SampledFunction fh = group_convolve(f, h);
  double worst = 0.0;
  for (double lam : {0.5, 1.0, -0.75}) {
    KernelOptions o;
    o.xi = symmetric_xi_grid(g.q, 0.5 * g.qx / std::abs(lam) + 4);
    const OperatorMatrix A = group_ft(fh, lam, o);
    const OperatorMatrix P = compose(group_ft(f, lam, o), group_ft(h, lam, o));
    worst = std::max(worst, rel_hs_error(P, A));
  }
  return make(4, "convolution theorem", worst, 1e-4);
}

CriterionResult c5_translates() {
  const GridSpec g = grid(4, 8, 128, 48, 12, 384);
  const SampledFunction f = sample(gaussian(), g);
  double worst = 0.0, hs = 0.0;
  for (Lat p : {Lat{1, 1, 1}, Lat{-1, 2, 0}, Lat{0, -1, 3}, Lat{2, 2, -1}}) {
    const SampledFunction fp = left_translate(f, LatticePoint(p.k, p.l, p.m));
    for (double lam : {0.5, 1.0, -0.75, 2.0}) {
      KernelOptions o;
      o.xi = symmetric_xi_grid(g.q, 0.5 * g.qx / std::abs(lam) + 8);
      const OperatorMatrix A = group_ft(fp, lam, o);
      const OperatorMatrix F = group_ft(f, lam, o);
      OperatorMatrix B = repn_apply_left(GroupElement(2.0 * p.k, p.l, 0.0), F);
      B.entries *= std::polar(1.0, 2 * kPi * p.m * lam);
      worst = std::max(worst, rel_hs_error(A, B));
      hs = std::max(hs, std::abs(std::sqrt(hs_norm2(A) / hs_norm2(F)) - 1.0));
    }
  }
  return make(5, "translate identities", worst, 1e-8, hs <= 1e-10,
              "hs_norm_diff=" + sci(hs) + " (tol 1e-10)");
}

CriterionResult c6_weight_forms() {
  const GridSpec g = grid(4, 8, 128, 48, 16, 512);
  const SampledFunction phi = sample(gaussian(), g);
  const std::vector<double> nodes = unit_interval_nodes(16);
  const WeightTable A = weight_table(phi, 2, nodes, WeightForm::Operator);
  const WeightTable B = weight_table(phi, 2, nodes, WeightForm::Kernel);
  // relative to G_00 at the same node; channels far below it carry only
  // rounding-level absolute error
  double worst = 0.0, entry = 0.0;
  for (const auto& [kl, v] : A.values)
    for (std::size_t a = 0; a < v.size(); ++a) {
      const double d = std::abs(v[a] - B.at(kl.first, kl.second)[a]);
      worst = std::max(worst, d / std::abs(A.at(0, 0)[a]));
      if (std::abs(v[a]) > 1e-6 * std::abs(A.at(0, 0)[a])) entry = std::max(entry, d / std::abs(v[a]));
    }
  return make(6, "operator vs kernel weight forms", worst, 1e-10, true,
              "per_entry_above_1e-6_G00=" + sci(entry));
}

CriterionResult c7_coherence() {
  const GridSpec g = grid(8, 8, 128, 96, 8, 256);
  const SampledFunction phi = sample(gaussian(), g);
  const std::vector<double> nodes = unit_interval_nodes(16);
  const WeightTable W = weight_table(phi, 2, nodes, WeightForm::Kernel);
  TranslateTable tt(phi);
  const double n2 = phi.norm2();
  double worst = 0.0;
  for (int k = -2; k <= 2; ++k)
    for (int l = -2; l <= 2; ++l)
      for (int m = -2; m <= 2; ++m) {
        cplx c = 0.0;
        for (std::size_t a = 0; a < nodes.size(); ++a)
          c += W.at(k, l)[a] * std::polar(1.0, -2 * kPi * m * nodes[a]);
        c /= static_cast<double>(nodes.size());
        worst = std::max(worst, std::abs(c - tt({k, l, m})) / n2);
      }
  return make(7, "weight Fourier coefficients vs translate inner products", worst, 1e-3);
}

CriterionResult c8_frame_bounds() {
  const GridSpec g = grid(4, 4, 96, 64, 24, 384);
  const SampledFunction phi = sample(cell_bump(), g);
  const GramMatrix G = gram_matrix(phi, 4);
  const std::vector<double> G00 = weight_G00(phi, unit_interval_nodes(16));
  const FrameReport r = frame_bounds(G, 1e-10, G00, 1e-8);
  const double gap = std::max(r.rel_gap_A, r.rel_gap_B);
  return make(8, "Gram frame bounds vs G00 range (K=4, cell bump)", gap, 0.10, true,
              "A=" + sci(r.A_est) + " B=" + sci(r.B_est) + " G00=[" + sci(r.G00_min) + "," +
                  sci(r.G00_max) + "]");
}

CriterionResult c9_canonical_dual(std::uint64_t seed) {
  const GridSpec g = grid(4, 4, 64, 48, 12, 192);
  const SampledFunction phi = sample(gaussian(), g);
  const int K = 2;
  const CoeffArray c = seeded(K, K, K, seed + 9);
  const SampledFunction f = synthesize(phi, c);
  const GramMatrix G = gram_matrix(phi, K);
  CoeffArray analysis(K);
  const std::vector<Lat> pts = box_points(K);
  for (std::size_t i = 0; i < pts.size(); ++i)
    analysis.values[i] =
        inner(f, left_translate(phi, LatticePoint(pts[i].k, pts[i].l, pts[i].m)));
  const SampledFunction rec = synthesize(phi, canonical_dual_coeffs(G, analysis));
  return make(9, "canonical dual expansion", rel_l2_error(rec, f), 1e-6);
}

CriterionResult c10_v0(std::uint64_t seed) {
  const GridSpec g = GridSpec::uniform(4, 32, 20, 160);
  const SampledFunction phi = sample(gaussian(), g);
  const int K = 8;
  const CoeffArray c = seeded(K, 0, K - 3, seed + 10);
  const SampledFunction f = synthesize(phi, c);
  DualOptions o;
  o.setting = DualSetting::V0;
  const DualGenerator psi = build_dual_generator(phi, K, o);
  const SampledFunction rec = sample_reconstruct_v0(central_samples(f, K), psi);
  // sup over the interior |t| <= K - 3
  double e = 0.0, n = 0.0;
  for (int ix = 0; ix < g.Nx; ++ix)
    for (int iy = 0; iy < g.Ny; ++iy)
      for (int it = 0; it < g.Nt; ++it) {
        if (std::abs(g.t(it)) > K - 3) continue;
        e = std::max(e, std::abs(rec.at(ix, iy, it) - f.at(ix, iy, it)));
        n = std::max(n, std::abs(f.at(ix, iy, it)));
      }
  // the necessary condition on the support set
  std::vector<double> nodes = unit_interval_nodes(16);
  const std::vector<double> G00 = weight_G00(phi, nodes);
  const std::vector<bool> omega =
      omega_support(G00, 1e-8 * *std::max_element(G00.begin(), G00.end()));
  const PNormReport pr = p_norm_check(p_symbol(central_samples(phi, K), nodes), omega, 1e-8, true);
  const double rel = rel_l2_error(rec, f), sup = e / n;
  return make(10, "V0 reconstruction from central samples (K=8)", std::max(rel, sup), 1e-3,
              pr.A_P > 0.0 && pr.ok,
              "rel_l2=" + sci(rel) + " interior_sup=" + sci(sup) + " A_P=" + sci(pr.A_P));
}

// Channel-wise alpha from the closed-form generator in lattice coordinates.
cplx alpha_direct(const CoeffArray& c, const Generator& G, int K, long k, long l, long m) {
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
        cplx gw = 0.0;
        for (long mm = -K; mm <= K; ++mm) {
          const cplx cm = c.at(static_cast<int>(k), static_cast<int>(l), static_cast<int>(mm));
          if (cm != cplx(0.0))
            gw += cm * phi_at(lattice_mul(lattice_inv(LatticePoint(k, l, mm)), w));
        }
        s += gw * std::conj(phi_at(lattice_inv(pp)));
      }
  return s;
}

CriterionResult c11_general(std::uint64_t seed) {
  const GridSpec g = grid(4, 4, 128, 80, 32, 512);
  const Generator G = gaussian();
  const SampledFunction phi = sample(G, g);
  const int K = 6;
  const CoeffArray c = seeded(K, 2, K - 3, seed + 11);
  const SampledFunction f = synthesize(phi, c);
  const DualGenerator psi = build_dual_generator(phi, K);
  const double rel = rel_l2_error(reconstruct(c, phi, psi), f);
  const CoeffArray alpha = alpha_coeffs(c, phi, K);
  double err = 0.0, amax = 0.0;
  for (int k = -2; k <= 2; ++k)
    for (int l = -2; l <= 2; ++l)
      for (int m = -K; m <= K; ++m) {
        const cplx o = alpha_direct(c, G, K, k, l, m);
        amax = std::max(amax, std::abs(o));
        err = std::max(err, std::abs(alpha.at(k, l, m) - o));
      }
  const double aerr = err / amax;
  return make(11, "alpha pipeline with least-squares dual (K=6)", rel, 1e-3, aerr <= 1e-10,
              "alpha_vs_direct=" + sci(aerr) + " (tol 1e-10) dual_residual=" + sci(psi.residual));
}

CriterionResult c12_flambda_forms() {
  const GridSpec g = GridSpec::uniform(4, 128, 8, 128);
  const SampledFunction f = sample(gaussian(), g);
  double form = 0.0, hs = 0.0;
  for (double lam : {0.5, 1.0, -0.75}) {
    const FiberFunction h = t_fiber(f, lam);
    const OperatorMatrix base = weyl_kernel(h, lam);
    for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{0.5, 0.25}, std::pair{1.3, -0.5}}) {
      KernelOptions ko;
      ko.xi = union_grid(base.xi, auto_xi_grid(modulate_fiber(h, a, b), lam));
      ko.xi->i0 -= 8;
      ko.xi->n += 16;
      const OperatorMatrix I = flambda_integral(h, lam, a, b, ko);
      const OperatorMatrix C = flambda_conjugation(weyl_kernel(h, lam, ko), a, b);
      form = std::max(form, rel_hs_error(C, I));
      hs = std::max(hs, std::abs(std::sqrt(hs_norm2(I) / hs_norm2(base)) - 1.0));
    }
  }
  return make(12, "F_lambda conjugation vs integral form", form, 1e-8, hs <= 1e-8,
              "hs_invariance=" + sci(hs) + " (tol 1e-8)");
}

CriterionResult c13_expansion(std::uint64_t seed) {
  const GridSpec g = grid(4, 8, 192, 64, 24, 768);
  const SampledFunction phi = sample(gaussian(), g);
  Rng rng(seed + 13);
  CoeffArray c(4);
  for (cplx& v : c.values) v = rng.cuniform();
  const SampledFunction f = synthesize(phi, c);
  double worst = 0.0;
  for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{0.5, 0.25}}) {
    const double lam = 0.5;
    const OperatorMatrix E = flambda_expansion(c, phi, lam, a, b);
    KernelOptions ko;
    ko.xi = E.xi;
    worst = std::max(worst, rel_hs_error(E, flambda_integral(t_fiber(f, lam), lam, a, b, ko)));
  }
  return make(13, "frame-coefficient expansion of F_lambda (K=4)", worst, 1e-6);
}

CriterionResult c14_inversion(std::uint64_t seed) {
  const LambdaGrid lg = make_lambda_grid(4.0, 1.0 / 32);
  Rng rng(seed + 14);
  double pw = 0.0, xi_dep = 0.0;
  {
    const GridSpec g = GridSpec::uniform(4, 128, 8, 128);
    const SampledFunction f = sample(gaussian(), g);
    const FlambdaField F0 = flambda_field(f, lg, 0.0, 0.0);
    const FlambdaField F1 = flambda_field(f, lg, 0.5, 0.25);
    const double fmax = f.max_abs();
    for (int i = 0; i < 10; ++i) {
      const int ix = g.Nx / 2 + static_cast<int>(rng.symmetric() * 6);
      const int iy = g.Ny / 2 + static_cast<int>(rng.symmetric() * 6);
      const int it = g.Nt / 2 + static_cast<int>(rng.symmetric() * 6);
      const GroupElement p(g.x(ix), g.y(iy), g.t(it));
      const cplx v0 = invert_pointwise(F0, p), v1 = invert_pointwise(F1, p);
      pw = std::max(pw, std::abs(v0 - f.at(ix, iy, it)) / fmax);
      xi_dep = std::max(xi_dep, std::abs(v0 - v1) / fmax);
    }
  }
  double cor = 0.0;
  {
    const GridSpec g = GridSpec::uniform(4, 128, 16, 256);
    const SampledFunction phi = sample(gaussian(), g);
    CoeffArray c(3);
    for (cplx& v : c.values) v = rng.cuniform();
    const SampledFunction f = synthesize(phi, c);
    std::vector<GroupElement> pts;
    std::vector<cplx> ref;
    for (int i = 0; i < 10; ++i) {
      // inside the synthesized support: |x| <= 5, |y| <= 2.5, |t| <= 2.5
      const int ix = g.Nx / 2 + static_cast<int>(rng.symmetric() * 20);
      const int iy = g.Ny / 2 + static_cast<int>(rng.symmetric() * 10);
      const int it = g.Nt / 2 + static_cast<int>(rng.symmetric() * 20);
      pts.emplace_back(g.x(ix), g.y(iy), g.t(it));
      ref.push_back(f.at(ix, iy, it));
    }
    const std::vector<cplx> vals = reconstruct_corollary(c, phi, lg, pts);
    const double fmax = f.max_abs();
    for (std::size_t i = 0; i < pts.size(); ++i) cor = std::max(cor, std::abs(vals[i] - ref[i]) / fmax);
  }
  return make(14, "pointwise inversion and coefficient inversion", std::max(pw, cor), 1e-3,
              xi_dep <= 1e-3,
              "pointwise=" + sci(pw) + " xi_dependence=" + sci(xi_dep) + " coefficient=" + sci(cor));
}

// Criteria cheap enough for the quick subset and the determinism rerun.
std::vector<CriterionResult> quick_subset(std::uint64_t seed,
                                          const std::function<void(const CriterionResult&)>& cb) {
  std::vector<CriterionResult> out;
  auto push = [&](CriterionResult r) {
    if (cb) cb(r);
    out.push_back(std::move(r));
  };
  push(c1_algebra(seed));
  push(c3_hs_scaling());
  push(c9_canonical_dual(seed));
  push(c10_v0(seed));
  push(c12_flambda_forms());
  return out;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  auto push = [&](CriterionResult r) {
    if (opt.on_result) opt.on_result(r);
    out.push_back(std::move(r));
  };
  auto guarded = [&](int id, const char* name, auto&& fn) {
    try {
      push(fn());
    } catch (const std::exception& e) {
      push(make(id, name, std::numeric_limits<double>::infinity(), 0.0, false,
                std::string("error: ") + e.what()));
    }
  };
  const std::uint64_t s = opt.seed;
  if (opt.quick) {
    for (CriterionResult& r : quick_subset(s, nullptr)) push(std::move(r));
  } else {
    guarded(1, "group and representation algebra", [&] { return c1_algebra(s); });
    guarded(2, "Plancherel ratio", [&] { return c2_plancherel(); });
    guarded(3, "HS scaling of the Weyl transform", [&] { return c3_hs_scaling(); });
    guarded(4, "convolution theorem", [&] { return c4_convolution(); });
    guarded(5, "translate identities", [&] { return c5_translates(); });
    guarded(6, "operator vs kernel weight forms", [&] { return c6_weight_forms(); });
    guarded(7, "weight Fourier coefficients vs translate inner products",
            [&] { return c7_coherence(); });
    guarded(8, "Gram frame bounds vs G00 range (K=4, cell bump)", [&] { return c8_frame_bounds(); });
    guarded(9, "canonical dual expansion", [&] { return c9_canonical_dual(s); });
    guarded(10, "V0 reconstruction from central samples (K=8)", [&] { return c10_v0(s); });
    guarded(11, "alpha pipeline with least-squares dual (K=6)", [&] { return c11_general(s); });
    guarded(12, "F_lambda conjugation vs integral form", [&] { return c12_flambda_forms(); });
    guarded(13, "frame-coefficient expansion of F_lambda (K=4)", [&] { return c13_expansion(s); });
    guarded(14, "pointwise inversion and coefficient inversion", [&] { return c14_inversion(s); });
  }
  // determinism: two runs of the quick subset give byte-identical reports
  guarded(15, "determinism of the selftest report", [&] {
    const std::string a = acceptance_csv(quick_subset(s, nullptr));
    const std::string b = acceptance_csv(quick_subset(s, nullptr));
    return make(15, "determinism of the selftest report", a == b ? 0.0 : 1.0, 0.0, true,
                "report_bytes=" + std::to_string(a.size()));
  });
  return out;
}

std::string acceptance_line(const CriterionResult& r) {
  char b[96];
  std::snprintf(b, sizeof b, "criterion %2d %s value=%.3e tol=%.1e ", r.id,
                r.pass ? "PASS" : "FAIL", r.value, r.tol);
  std::string s = b + r.name;
  if (!r.detail.empty()) s += " [" + r.detail + "]";
  return s;
}

std::string acceptance_csv(const std::vector<CriterionResult>& rs) {
  std::string out = "id,name,value,tol,pass,detail\n";
  char b[64];
  for (const CriterionResult& r : rs) {
    out += std::to_string(r.id) + ",\"" + r.name + "\",";
    std::snprintf(b, sizeof b, "%.17g,%.17g,", r.value, r.tol);
    out += b;
    out += (r.pass ? "1," : "0,") + ("\"" + r.detail + "\"") + "\n";
  }
  return out;
}

}  // namespace heis
