// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#include "heis/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include <Eigen/Dense>

#include "heis/flambda.hpp"
#include "heis/siframe.hpp"

namespace heis {

SymbolP p_symbol(const LatticeSamples& s, const std::vector<double>& nodes) {
  SymbolP P;
  P.nodes = nodes;
  P.K = s.K;
  P.norm2.assign(nodes.size(), 0.0);
  for (int k = -s.K; k <= s.K; ++k)
    for (int l = -s.K; l <= s.K; ++l) {
      auto& v = P.P[{k, l}];
      v.assign(nodes.size(), 0.0);
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        cplx acc = 0.0;
        for (int m = -s.K; m <= s.K; ++m) {
          const cplx x = s.at(k, l, m);
          if (x != cplx(0.0)) acc += x * std::polar(1.0, 2.0 * kPi * m * nodes[a]);
        }
        v[a] = acc;
        P.norm2[a] += std::norm(acc);
      }
    }
  P.P0 = P.P.at({0, 0});
  return P;
}

PNormReport p_norm_check(const SymbolP& P, const std::vector<bool>& mask, double eps,
                         bool central_only) {
  if (mask.size() != P.nodes.size())
    throw DimensionMismatch("p_norm_check: mask and symbol nodes differ");
  PNormReport r;
  r.eps = eps;
  r.A_P = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t a = 0; a < mask.size(); ++a) {
    const double v = central_only ? std::norm(P.P0[a]) : P.norm2[a];
    if (mask[a]) {
      any = true;
      r.A_P = std::min(r.A_P, v);
      r.B_P = std::max(r.B_P, v);
    } else {
      r.off_mask_max = std::max(r.off_mask_max, v);
    }
  }
  if (!any) r.A_P = 0.0;
  r.ok = any && r.A_P > eps && r.off_mask_max <= eps;
  return r;
}

cplx discrete_convolve_lattice(const LatticeSamples& g, const LatticeSamples& h, Lat p) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h.values[i] == cplx(0.0)) continue;
    s += g.get(mul(p, inv(h.point(i)))) * h.values[i];
  }
  return s;
}

cplx lattice_value(const SampledFunction& f, Lat p) {
  const GridSpec& g = f.grid;
  const long ix = g.Nx / 2 + 2L * p.k * g.qx;
  const long iy = g.Ny / 2 + static_cast<long>(p.l) * g.q;
  const long it = g.Nt / 2 + static_cast<long>(p.m) * g.pt();
  if (ix < 0 || ix >= g.Nx || iy < 0 || iy >= g.Ny || it < 0 || it >= g.Nt) return 0.0;
  return f.at(static_cast<int>(ix), static_cast<int>(iy), static_cast<int>(it));
}

LatticeSamples central_samples(const SampledFunction& f, int K) {
  LatticeSamples s(K);
  for (int m = -K; m <= K; ++m) {
    if (std::abs(m) * f.grid.pt() > f.grid.Nt / 2 - 1)
      throw LatticeOutsideGrid("central sample m=" + std::to_string(m) + " is off the grid");
    s.at(0, 0, m) = lattice_value(f, {0, 0, m});
  }
  return s;
}

CoeffArray alpha_coeffs(const CoeffArray& c, const SampledFunction& phi, int K) {
  const LatticeSamples ph_tilde = sample_at_lattice(tilde(phi), K);
  const LatticeArray box(K);
  CoeffArray alpha(K);
  LatticeSamples g(K);
  for (int k = -K; k <= K; ++k)
    for (int l = -K; l <= K; ++l) {
      bool any = false;
      for (int m = -K; m <= K; ++m) any = any || c.get(k, l, m) != cplx(0.0);
      if (!any) continue;
      // g_{2k,l} = sum_m c L_(2k,l,m) phi, read at the lattice box
      for (std::size_t i = 0; i < box.size(); ++i) {
        const Lat w = box.point(i);
        cplx v = 0.0;
        for (int m = -K; m <= K; ++m) {
          const cplx cm = c.get(k, l, m);
          if (cm != cplx(0.0)) v += cm * lattice_value(phi, mul(inv(Lat{k, l, m}), w));
        }
        g.values[i] = v;
      }
      for (int m = -K; m <= K; ++m)
        alpha.at(k, l, m) = discrete_convolve_lattice(g, ph_tilde, {k, l, m});
    }
  return alpha;
}

std::string to_string(DualMode m) {
  return m == DualMode::FiberDivision ? "fiber-division" : "least-squares";
}
std::string to_string(DualSetting s) { return s == DualSetting::V0 ? "v0" : "general"; }

namespace {

// <phi, L_q phi> on a dense offset box, computed on first use.
class OffsetTable {
 public:
  OffsetTable(const SampledFunction& phi, int Rk, int Rl, int Rm)
      : tt_(phi), Rk_(Rk), Rl_(Rl), Rm_(Rm) {
    const std::size_t n = static_cast<std::size_t>(2 * Rk + 1) * (2 * Rl + 1) * (2 * Rm + 1);
    v_.assign(n, 0.0);
    known_.assign(n, 0);
  }
  cplx operator()(Lat q) {
    if (std::abs(q.k) > Rk_ || std::abs(q.l) > Rl_ || std::abs(q.m) > Rm_)
      throw DimensionMismatch("offset table too small");
    const std::size_t i =
        (static_cast<std::size_t>(q.k + Rk_) * (2 * Rl_ + 1) + (q.l + Rl_)) * (2 * Rm_ + 1) +
        (q.m + Rm_);
    if (!known_[i]) {
      v_[i] = tt_(q);
      known_[i] = 1;
    }
    return v_[i];
  }

 private:
  TranslateTable tt_;
  int Rk_, Rl_, Rm_;
  std::vector<cplx> v_;
  std::vector<char> known_;
};

using SparseCoeffs = std::vector<std::pair<Lat, cplx>>;

// Alpha of the test element L_(0,0,ms) phi, dropping entries below 1e-14 of
// the largest. V0 uses the central samples phi(0,0,m - ms).
SparseCoeffs test_alpha(const SampledFunction& phi, int K, int ms, DualSetting setting) {
  SparseCoeffs a;
  if (setting == DualSetting::V0) {
    for (int m = -K; m <= K; ++m) {
      const cplx v = lattice_value(phi, {0, 0, m - ms});
      if (v != cplx(0.0)) a.push_back({Lat{0, 0, m}, v});
    }
    return a;
  }
  CoeffArray c(K);
  c.at(0, 0, ms) = 1.0;
  const CoeffArray al = alpha_coeffs(c, phi, K);
  double amax = 0.0;
  for (const cplx& v : al.values) amax = std::max(amax, std::abs(v));
  for (std::size_t i = 0; i < al.size(); ++i)
    if (std::abs(al.values[i]) > 1e-14 * amax) a.push_back({al.point(i), al.values[i]});
  return a;
}

CoeffArray to_box(const SparseCoeffs& s) {
  int K = 0;
  for (const auto& [p, v] : s) K = std::max({K, std::abs(p.k), std::abs(p.l), std::abs(p.m)});
  CoeffArray c(K);
  for (const auto& [p, v] : s) c.at(p.k, p.l, p.m) += v;
  return c;
}

// One test element in the translate basis: coefficient vectors over pts of
// the reconstruction columns B (one per ansatz point) and of the target.
struct LsTest {
  std::vector<Lat> pts;
  Eigen::MatrixXcd B;
  Eigen::VectorXcd target;
};

LsTest ls_test(const SparseCoeffs& alpha, const std::vector<Lat>& ansatz, int ms) {
  std::map<std::tuple<int, int, int>, long> index;
  LsTest t;
  auto slot = [&](Lat p) {
    auto [it, fresh] = index.try_emplace({p.k, p.l, p.m}, static_cast<long>(t.pts.size()));
    if (fresh) t.pts.push_back(p);
    return it->second;
  };
  std::vector<std::vector<std::pair<long, cplx>>> cols(ansatz.size());
  for (std::size_t r = 0; r < ansatz.size(); ++r)
    for (const auto& [p, v] : alpha) cols[r].push_back({slot(mul(p, ansatz[r])), v});
  const long it = slot({0, 0, ms});
  const long P = static_cast<long>(t.pts.size());
  t.B = Eigen::MatrixXcd::Zero(P, static_cast<long>(ansatz.size()));
  for (std::size_t r = 0; r < ansatz.size(); ++r)
    for (const auto& [i, v] : cols[r]) t.B(i, static_cast<long>(r)) += v;
  t.target = Eigen::VectorXcd::Zero(P);
  t.target[it] = 1.0;
  return t;
}

// H(j, i) = <L_{p_i} phi, L_{p_j} phi>, so ||sum e_i L_{p_i} phi||^2 = e^* H e.
Eigen::MatrixXcd ls_metric(const std::vector<Lat>& pts, OffsetTable& table) {
  const long P = static_cast<long>(pts.size());
  Eigen::MatrixXcd H(P, P);
  for (long i = 0; i < P; ++i)
    for (long j = i; j < P; ++j) {
      const cplx v = table(mul(inv(pts[i]), pts[j]));
      H(j, i) = v;
      H(i, j) = std::conj(v);
    }
  return H;
}

std::vector<bool> support_mask(const SampledFunction& phi, const DualOptions& opt,
                               std::vector<double>* nodes_out) {
  const std::vector<double> nodes = unit_interval_nodes(opt.NG);
  const std::vector<double> G00 = weight_G00(phi, nodes);
  const double gmax = *std::max_element(G00.begin(), G00.end());
  std::vector<bool> mask = omega_support(G00, opt.eps_supp_rel * gmax);
  if (gmax <= 0.0 || std::none_of(mask.begin(), mask.end(), [](bool b) { return b; }))
    throw NoSupport("the support set of G_00 is empty");
  *nodes_out = nodes;
  return mask;
}

void least_squares_dual(const SampledFunction& phi, int K, const DualOptions& opt,
                        DualGenerator& out) {
  const int M = K - opt.m_margin;
  if (M < 0) throw ConfigError("m_margin exceeds K");
  std::vector<Lat> ansatz;
  const int R = opt.setting == DualSetting::V0 ? 0 : opt.psi_kl;
  for (int k = -R; k <= R; ++k)
    for (int l = -R; l <= R; ++l)
      for (int m = -K; m <= K; ++m) ansatz.push_back({k, l, m});
  const long n = static_cast<long>(ansatz.size());

  std::vector<LsTest> tests;
  int Rk = 0, Rl = 0, Rm = 0;
  for (int ms = -M; ms <= M; ++ms) {
    tests.push_back(ls_test(test_alpha(phi, K, ms, opt.setting), ansatz, ms));
    for (const Lat& u : tests.back().pts)
      for (const Lat& v : tests.back().pts) {
        const Lat q = mul(inv(u), v);
        Rk = std::max(Rk, std::abs(q.k));
        Rl = std::max(Rl, std::abs(q.l));
        Rm = std::max(Rm, std::abs(q.m));
      }
  }
  OffsetTable table(phi, Rk, Rl, Rm);

  // (B^* H B) d = B^* H target, summed over the tests
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
  for (const LsTest& t : tests) {
    const Eigen::MatrixXcd H = ls_metric(t.pts, table);
    const Eigen::MatrixXcd HB = H * t.B;
    A += t.B.adjoint() * HB;
    b += HB.adjoint() * t.target;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (A + A.adjoint()));
  const double emax = es.eigenvalues().maxCoeff(), emin = es.eigenvalues().minCoeff();
  out.condition = emin > 0.0 ? emax / emin : std::numeric_limits<double>::infinity();
  if (!(out.condition <= opt.cond_max))
    throw IllConditioned("least-squares normal equations have condition " +
                         std::to_string(out.condition));
  const Eigen::VectorXcd d =
      es.eigenvectors() *
      (es.eigenvectors().adjoint() * b).cwiseQuotient(es.eigenvalues().cast<cplx>());

  SparseCoeffs psi_c;
  for (long r = 0; r < n; ++r) psi_c.push_back({ansatz[r], d[r]});
  CoeffArray coeffs = to_box(psi_c);
  out.psi = synthesize(phi, coeffs);
  out.coeffs = coeffs;

  // relative error in the Gram metric, on merged coefficients
  const double n0 = std::sqrt(std::abs(table({0, 0, 0})));
  out.test_residuals.clear();
  for (const LsTest& t : tests) {
    const Eigen::VectorXcd e = t.B * d - t.target;
    const cplx q = e.dot(ls_metric(t.pts, table) * e);
    out.test_residuals.push_back(std::sqrt(std::abs(q)) / n0);
  }
}

// phi^(lambda) / A(sigma lambda) on the support, recovered on the grid.
SampledFunction divide_and_invert(const SampledFunction& phi, int K, DualSetting setting,
                                  int sigma, const std::vector<bool>& mask,
                                  const std::vector<double>& mask_nodes,
                                  const LambdaGrid& lg, double eps) {
  const LatticeSamples s =
      setting == DualSetting::V0 ? central_samples(phi, K) : sample_at_lattice(phi, K);
  const SymbolP P = p_symbol(s, lg.nodes);
  const SymbolP Pm = p_symbol(s, [&] {
    std::vector<double> neg(lg.nodes);
    for (double& v : neg) v = -v;
    return neg;
  }());
  const SymbolP& Ps = sigma > 0 ? P : Pm;
  FlambdaField F;
  F.lambdas = lg.nodes;
  F.weights = lg.weights;
  const FiberEvaluator ev(phi);
  for (std::size_t j = 0; j < lg.nodes.size(); ++j) {
    const double lam = lg.nodes[j];
    OperatorMatrix op = weyl_kernel(ev(lam), lam);
    const cplx A = setting == DualSetting::V0 ? Ps.P0[j] : cplx(Ps.norm2[j]);
    if (!omega_at(mask, mask_nodes, lam) || std::abs(A) <= eps)
      op.entries.setZero();
    else
      op.entries /= A;
    F.ops.push_back(std::move(op));
  }
  return invert_grid(F, phi.grid);
}

LambdaGrid default_inversion_grid(const GridSpec& g) {
  // midpoints over the whole t band with spacing 1/(2T)
  return make_lambda_grid(0.5 * g.pt(), 1.0 / (2.0 * g.T), 1);
}

// max relative L2 error of f = L_(0,0,ms) phi, |ms| <= M, from central samples
// (V0) or from its alpha (general).
std::vector<double> grid_residuals(const SampledFunction& phi, int K, int M,
                                   const DualGenerator& g) {
  std::vector<double> res;
  for (int ms = -M; ms <= M; ++ms) {
    const SampledFunction f = left_translate(phi, LatticePoint(0, 0, ms));
    SampledFunction rec;
    if (g.setting == DualSetting::V0) {
      rec = sample_reconstruct_v0(central_samples(f, K), g);
    } else {
      CoeffArray c(K);
      c.at(0, 0, ms) = 1.0;
      rec = reconstruct(c, phi, g);
    }
    res.push_back(rel_l2_error(rec, f));
  }
  return res;
}

void fiber_division_dual(const SampledFunction& phi, int K, const DualOptions& opt,
                         DualGenerator& out) {
  const int M = std::max(0, K - opt.m_margin);
  std::vector<double> mnodes;
  const std::vector<bool> mask = support_mask(phi, opt, &mnodes);
  const LambdaGrid lg = opt.lambdas ? *opt.lambdas : default_inversion_grid(phi.grid);
  auto build = [&](int sigma) {
    DualGenerator g = out;
    g.sigma = sigma;
    g.psi = divide_and_invert(phi, K, opt.setting, sigma, mask, mnodes, lg, opt.eps_symbol);
    return g;
  };
  // on f = phi itself
  auto basis_error = [&](const DualGenerator& g) {
    if (g.setting == DualSetting::V0)
      return rel_l2_error(sample_reconstruct_v0(central_samples(phi, K), g), phi);
    CoeffArray c(K);
    c.at(0, 0, 0) = 1.0;
    return rel_l2_error(reconstruct(c, phi, g), phi);
  };
  if (opt.sigma) {
    out = build(*opt.sigma);
  } else {
    DualGenerator plus = build(+1), minus = build(-1);
    const double ep = basis_error(plus), em = basis_error(minus);
    // near-ties (even symbols) resolve to +1
    const bool take_plus = ep <= em * (1.0 + 1e-9) + 1e-300;
    out = take_plus ? plus : minus;
    out.residual_other_sigma = take_plus ? em : ep;
  }
  out.test_residuals = grid_residuals(phi, K, M, out);
}

}  // namespace

DualGenerator build_dual_generator(const SampledFunction& phi, int K,
                                   const DualOptions& opt) {
  DualGenerator out;
  out.mode = opt.mode;
  out.setting = opt.setting;
  out.K = K;
  if (phi.norm2() == 0.0) throw NoSupport("generator is zero");
  if (opt.mode == DualMode::FiberDivision) {
    fiber_division_dual(phi, K, opt, out);
  } else {
    least_squares_dual(phi, K, opt, out);
  }
  {
    const LatticeSamples s =
        opt.setting == DualSetting::V0 ? central_samples(phi, K) : sample_at_lattice(phi, K);
    std::vector<double> mnodes = unit_interval_nodes(opt.NG);
    const SymbolP P = p_symbol(s, mnodes);
    const std::vector<bool> full(mnodes.size(), true);
    const PNormReport r = p_norm_check(P, full, opt.eps_symbol,
                                       opt.setting == DualSetting::V0);
    out.A_P = r.A_P;
    out.B_P = r.B_P;
  }
  out.residual = 0.0;
  for (double r : out.test_residuals) out.residual = std::max(out.residual, r);
  out.accepted = out.residual <= opt.residual_bound;
  return out;
}

SampledFunction reconstruct(const CoeffArray& c, const SampledFunction& phi,
                            const DualGenerator& psi, const TranslateOptions& opt) {
  const CoeffArray alpha = alpha_coeffs(c, phi, c.K);
  if (!psi.coeffs) return synthesize(psi.psi, alpha, opt);
  // sum_p alpha_p L_p sum_r d_r L_r phi = sum_{p,r} alpha_p d_r L_{p r} phi
  const CoeffArray& d = *psi.coeffs;
  SparseCoeffs comb;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha.values[i] == cplx(0.0)) continue;
    const Lat p = alpha.point(i);
    for (std::size_t j = 0; j < d.size(); ++j)
      if (d.values[j] != cplx(0.0))
        comb.push_back({mul(p, d.point(j)), alpha.values[i] * d.values[j]});
  }
  if (comb.empty()) return SampledFunction(phi.grid);
  return synthesize(phi, to_box(comb), opt);
}

SampledFunction sample_reconstruct_v0(const LatticeSamples& fsamp, const DualGenerator& psi,
                                      const TranslateOptions& opt) {
  CoeffArray c(fsamp.K);
  for (int m = -fsamp.K; m <= fsamp.K; ++m) c.at(0, 0, m) = fsamp.at(0, 0, m);
  return synthesize(psi.psi, c, opt);
}

}  // namespace heis
