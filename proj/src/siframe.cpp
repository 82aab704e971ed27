// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#include "heis/siframe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <Eigen/Eigenvalues>

namespace heis {

namespace {

// Signed r sequence 0, 1, -1, 2, -2, ... grouped in +-pairs.
template <class Term>
cplx r_sum(int R, double stop_rel, Term term) {
  cplx sum = term(0);
  double mass = std::abs(sum);
  for (int r = 1; r <= R; ++r) {
    const cplx a = term(r), b = term(-r);
    sum += a + b;
    const double big = std::max(std::abs(a), std::abs(b));
    mass += std::abs(a) + std::abs(b);
    if (big <= stop_rel * mass) break;
  }
  return sum;
}

// Kernel of phi at mu, on its automatic grid widened by `pad` rows.
OperatorMatrix padded_kernel(const FiberFunction& h, double mu, int pad) {
  XiGrid xi = auto_xi_grid(h, mu);
  xi.i0 -= static_cast<long>(pad) * xi.q;
  xi.n += 2L * pad * xi.q;
  KernelOptions ko;
  ko.xi = xi;
  return weyl_kernel(h, mu, ko);
}

// sum_{xi,eta} K(xi,eta) conj(K(xi+l,eta)) e^{-2 pi i mu k (2 xi + l)}.
cplx kernel_channel(const OperatorMatrix& K, int k, int l) {
  const long n = K.xi.n, s = static_cast<long>(l) * K.xi.q;
  const double mu = K.lambda;
  cplx acc = 0.0;
  for (long i = std::max(0L, -s); i < n && i + s < n; ++i) {
    const double arg = -2.0 * kPi * mu * k * (2.0 * K.xi.xi(i) + l);
    const cplx ph = std::polar(1.0, arg);
    // a.dot(b) conjugates a, so this is sum_eta K(i,eta) conj K(i+s,eta).
    acc += ph * std::conj(K.entries.row(i).dot(K.entries.row(i + s)));
  }
  return acc;
}

cplx operator_term(const FiberFunction& hphi, const FiberFunction& htr,
                   double mu) {
  const XiGrid xi = union_grid(auto_xi_grid(hphi, mu), auto_xi_grid(htr, mu));
  KernelOptions ko;
  ko.xi = xi;
  return hs_inner(weyl_kernel(hphi, mu, ko), weyl_kernel(htr, mu, ko)) *
         std::abs(mu);
}

bool fiber_zero(const GridSpec& g, double mu) {
  return mu == 0.0 || std::abs(mu) >= 0.5 * g.pt();
}

}  // namespace

cplx weight_G_operator(const SampledFunction& phi, int k, int l, double lambda,
                       const WeightOptions& opt) {
  const SampledFunction tr = left_translate(phi, LatticePoint(k, l, 0));
  const FiberEvaluator ep(phi), et(tr);
  return r_sum(opt.R, opt.stop_rel, [&](int r) -> cplx {
    const double mu = lambda + r;
    if (fiber_zero(phi.grid, mu)) return 0.0;
    return operator_term(ep(mu), et(mu), mu);
  });
}

cplx weight_G_kernel(const SampledFunction& phi, int k, int l, double lambda,
                     const WeightOptions& opt) {
  const FiberEvaluator ep(phi);
  return r_sum(opt.R, opt.stop_rel, [&](int r) -> cplx {
    const double mu = lambda + r;
    if (fiber_zero(phi.grid, mu)) return 0.0;
    return kernel_channel(padded_kernel(ep(mu), mu, std::abs(l)), k, l) *
           std::abs(mu);
  });
}

WeightTable weight_table(const SampledFunction& phi, int Kkl,
                         const std::vector<double>& nodes, WeightForm form,
                         const WeightOptions& opt, const std::string& phi_id) {
  WeightTable t;
  t.phi_id = phi_id;
  t.nodes = nodes;
  t.R = opt.R;
  const FiberEvaluator ep(phi);
  if (form == WeightForm::Kernel) {
    // One kernel per (node, r) serves every channel.
    std::vector<std::pair<int, int>> ch;
    for (int k = -Kkl; k <= Kkl; ++k)
      for (int l = -Kkl; l <= Kkl; ++l) {
        ch.emplace_back(k, l);
        t.values[{k, l}].assign(nodes.size(), 0.0);
      }
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      std::vector<cplx> sum(ch.size(), 0.0);
      std::vector<double> mass(ch.size(), 0.0);
      std::vector<bool> done(ch.size(), false);
      auto terms = [&](int r, std::vector<cplx>& out) {
        const double mu = nodes[a] + r;
        out.assign(ch.size(), 0.0);
        if (fiber_zero(phi.grid, mu)) return;
        const OperatorMatrix K = padded_kernel(ep(mu), mu, Kkl);
        for (std::size_t c = 0; c < ch.size(); ++c)
          if (!done[c])
            out[c] = kernel_channel(K, ch[c].first, ch[c].second) * std::abs(mu);
      };
      std::vector<cplx> ta, tb;
      terms(0, ta);
      for (std::size_t c = 0; c < ch.size(); ++c) {
        sum[c] = ta[c];
        mass[c] = std::abs(ta[c]);
      }
      for (int r = 1; r <= opt.R; ++r) {
        terms(r, ta);
        terms(-r, tb);
        bool all = true;
        for (std::size_t c = 0; c < ch.size(); ++c) {
          if (done[c]) continue;
          sum[c] += ta[c] + tb[c];
          mass[c] += std::abs(ta[c]) + std::abs(tb[c]);
          if (std::max(std::abs(ta[c]), std::abs(tb[c])) <= opt.stop_rel * mass[c])
            done[c] = true;
          all = all && done[c];
        }
        if (all) break;
      }
      for (std::size_t c = 0; c < ch.size(); ++c) t.values[ch[c]][a] = sum[c];
    }
    return t;
  }
  for (int k = -Kkl; k <= Kkl; ++k)
    for (int l = -Kkl; l <= Kkl; ++l) {
      const SampledFunction tr = left_translate(phi, LatticePoint(k, l, 0));
      const FiberEvaluator et(tr);
      auto& v = t.values[{k, l}];
      v.resize(nodes.size());
      for (std::size_t a = 0; a < nodes.size(); ++a)
        v[a] = r_sum(opt.R, opt.stop_rel, [&](int r) -> cplx {
          const double mu = nodes[a] + r;
          if (fiber_zero(phi.grid, mu)) return 0.0;
          if (k == 0 && l == 0) {
            const FiberFunction h = ep(mu);
            return hs_norm2(weyl_kernel(h, mu)) * std::abs(mu);
          }
          return operator_term(ep(mu), et(mu), mu);
        });
    }
  return t;
}

std::vector<double> weight_G00(const SampledFunction& phi,
                               const std::vector<double>& nodes,
                               const WeightOptions& opt) {
  const FiberEvaluator ep(phi);
  std::vector<double> out(nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a)
    out[a] = r_sum(opt.R, opt.stop_rel, [&](int r) -> cplx {
               const double mu = nodes[a] + r;
               if (fiber_zero(phi.grid, mu)) return 0.0;
               return hs_norm2(weyl_kernel(ep(mu), mu)) * std::abs(mu);
             }).real();
  return out;
}

ConditionCReport condition_c(const WeightTable& table, int Kcc, double eps) {
  ConditionCReport rep;
  rep.eps = eps;
  for (const auto& [kl, vals] : table.values) {
    const auto [k, l] = kl;
    if ((k == 0 && l == 0) || std::abs(k) > Kcc || std::abs(l) > Kcc) continue;
    for (std::size_t a = 0; a < vals.size(); ++a) {
      const double v = std::abs(vals[a]);
      if (v > rep.max_violation) {
        rep.max_violation = v;
        rep.k = k;
        rep.l = l;
        rep.lambda = table.nodes[a];
      }
    }
  }
  rep.ok = rep.max_violation <= eps;
  return rep;
}

ConditionCReport condition_c(const SampledFunction& phi, int Kcc, double eps,
                             const std::vector<double>& nodes,
                             const WeightOptions& opt) {
  if (std::isinf(eps) && eps > 0) {
    ConditionCReport rep;
    rep.eps = eps;
    return rep;
  }
  return condition_c(weight_table(phi, Kcc, nodes, WeightForm::Kernel, opt), Kcc,
                     eps);
}

std::vector<Lat> box_points(int K) {
  const LatticeArray box(K);
  std::vector<Lat> pts(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) pts[i] = box.point(i);
  return pts;
}

TranslateTable::TranslateTable(const SampledFunction& phi)
    : phi_(&phi), sparse_(sparsify(phi)) {}

cplx TranslateTable::operator()(Lat q) {
  const auto key = std::make_tuple(q.k, q.l, q.m);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  cplx v;
  if (LatticeShift(phi_->grid, inv(q)).exact_everywhere())
    v = translate_inner(sparse_, *phi_, q);
  else
    v = inner(*phi_, left_translate(*phi_, LatticePoint(q.k, q.l, q.m)));
  cache_.emplace(key, v);
  return v;
}

namespace {

// Fraction of |f|^2 that L_p moves off the grid.
double translate_loss(const SparseFunction& f, Lat p) {
  const GridSpec& g = f.grid;
  const LatticeShift sh(g, p);
  double lost = 0.0;
  int off = 0;
  for (const auto& e : f.entries) {
    const int jx = e.ix + sh.dix(), jy = e.iy + sh.diy();
    bool inside = jx >= 0 && jx < g.Nx && jy >= 0 && jy < g.Ny;
    if (inside && sh.t_offset(e.ix, e.iy, &off)) inside = g.in_grid(jx, jy, e.it + off);
    if (!inside) lost += std::norm(e.v);
  }
  return f.norm2 > 0.0 ? lost * g.cell() / f.norm2 : 0.0;
}

}  // namespace

GramMatrix gram_matrix(const SampledFunction& phi, int K,
                       const TranslateOptions& opt) {
  const std::vector<Lat> pts = box_points(K);
  TranslateTable tt(phi);
  {
    const SparseFunction sp = sparsify(phi);
    for (const Lat& p : pts)
      if (translate_loss(sp, p) > opt.max_mass_loss)
        throw TranslateOutOfBand("gram_matrix: translate by (" + std::to_string(p.k) +
                                 "," + std::to_string(p.l) + "," +
                                 std::to_string(p.m) + ") leaves the grid");
  }
  const long N = static_cast<long>(pts.size());
  Eigen::MatrixXcd G(N, N);
  // <L_p phi, L_p' phi> = <phi, L_{p^-1 p'} phi>
  for (long i = 0; i < N; ++i)
    for (long j = i; j < N; ++j) {
      const cplx v = tt(mul(inv(pts[i]), pts[j]));
      G(i, j) = v;
      G(j, i) = std::conj(v);
    }
  return gram_from_matrix(G, K);
}

GramMatrix gram_from_matrix(const Eigen::MatrixXcd& m, int K) {
  GramMatrix g;
  g.K = K;
  g.entries = m;
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  g.hermitian_error = (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
  return g;
}

std::vector<bool> omega_support(const std::vector<double>& G00, double eps_supp) {
  std::vector<bool> mask(G00.size());
  for (std::size_t i = 0; i < G00.size(); ++i) mask[i] = G00[i] > eps_supp;
  return mask;
}

bool omega_at(const std::vector<bool>& mask, const std::vector<double>& nodes,
              double lambda) {
  if (mask.empty()) return false;
  double u = lambda - std::floor(lambda);
  if (u == 0.0) u = 1.0;  // the fundamental domain is (0, 1]
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double d = std::abs(nodes[i] - u);
    d = std::min(d, 1.0 - d);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return mask[best];
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hermitian_eig(
    const GramMatrix& g) {
  const Eigen::MatrixXcd H = 0.5 * (g.entries + g.entries.adjoint());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H);
}

}  // namespace

FrameReport frame_bounds(const GramMatrix& gram, double eps_rank) {
  FrameReport r;
  r.eps_rank = eps_rank;
  const auto es = hermitian_eig(gram);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double emax = ev.size() ? ev.maxCoeff() : 0.0;
  r.B_est = std::max(emax, 0.0);
  r.A_est = 0.0;
  for (long i = 0; i < ev.size(); ++i)
    if (ev[i] > eps_rank * emax) {
      ++r.rank;
      if (r.A_est == 0.0 || ev[i] < r.A_est) r.A_est = ev[i];
    }
  r.bessel_ok = std::isfinite(r.B_est);
  r.frame_ok = r.A_est > 0.0;
  r.bessel_verdict = "gram-only";
  return r;
}

FrameReport frame_bounds(const GramMatrix& gram, double eps_rank,
                         const std::vector<double>& G00, double eps_supp_rel,
                         double edge_tol) {
  FrameReport r = frame_bounds(gram, eps_rank);
  r.edge_tol = edge_tol;
  const double gmax = G00.empty() ? 0.0 : *std::max_element(G00.begin(), G00.end());
  r.eps_supp = eps_supp_rel * gmax;
  r.omega = omega_support(G00, r.eps_supp);
  r.G00_min = std::numeric_limits<double>::infinity();
  r.G00_max = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < G00.size(); ++i)
    if (r.omega[i]) {
      any = true;
      r.G00_min = std::min(r.G00_min, G00[i]);
      r.G00_max = std::max(r.G00_max, G00[i]);
    }
  if (!any) r.G00_min = 0.0;
  const double tolB = edge_tol * r.B_est;
  r.bessel_ok = std::isfinite(r.B_est);
  for (double v : G00) r.bessel_ok = r.bessel_ok && v <= r.B_est + tolB;
  r.rel_gap_A = r.A_est > 0.0 ? std::abs(r.A_est - r.G00_min) / r.A_est
                              : std::numeric_limits<double>::infinity();
  r.rel_gap_B = r.B_est > 0.0 ? std::abs(r.B_est - r.G00_max) / r.B_est
                              : std::numeric_limits<double>::infinity();
  r.bounds_agree = r.rel_gap_A <= edge_tol && r.rel_gap_B <= edge_tol;
  r.frame_ok = r.A_est > 0.0 && any && r.G00_min > 0.0;
  // Without Condition C, G_00 <= B is necessary but not sufficient.
  r.bessel_verdict = "necessary-only";
  return r;
}

CoeffArray canonical_dual_coeffs(const GramMatrix& gram, const CoeffArray& target,
                                 double eps_rank) {
  if (static_cast<long>(target.size()) != gram.entries.rows())
    throw DimensionMismatch("canonical_dual_coeffs: target size does not match gram");
  // S^-1 T b = T x with (T^* T) x = b, and (T^* T)(p, p') = <L_p' phi, L_p phi>
  // is the conjugate of the stored entries.
  GramMatrix m = gram;
  m.entries = gram.entries.conjugate();
  const auto es = hermitian_eig(m);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double emax = ev.size() ? ev.maxCoeff() : 0.0;
  const Eigen::MatrixXcd& V = es.eigenvectors();
  Eigen::VectorXcd b(static_cast<long>(target.size()));
  for (long i = 0; i < b.size(); ++i) b[i] = target.values[i];
  Eigen::VectorXcd w = V.adjoint() * b;
  int rank = 0;
  for (long i = 0; i < ev.size(); ++i) {
    if (emax > 0.0 && ev[i] > eps_rank * emax) {
      w[i] /= ev[i];
      ++rank;
    } else {
      w[i] = 0.0;
    }
  }
  if (rank == 0) throw SingularGram("canonical_dual_coeffs: gram has rank zero");
  const Eigen::VectorXcd x = V * w;
  CoeffArray out(target.K);
  for (long i = 0; i < x.size(); ++i) out.values[i] = x[i];
  return out;
}

void write_weight_csv(const WeightTable& t, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open " + path);
  std::fprintf(f, "k,l,lambda,re,im\n");
  for (const auto& [kl, vals] : t.values)
    for (std::size_t a = 0; a < vals.size(); ++a)
      std::fprintf(f, "%d,%d,%.17g,%.17g,%.17g\n", kl.first, kl.second, t.nodes[a],
                   vals[a].real(), vals[a].imag());
  std::fclose(f);
}

void write_frame_report_csv(const FrameReport& r, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open " + path);
  std::fprintf(f, "key,value\n");
  std::fprintf(f, "A_est,%.17g\nB_est,%.17g\n", r.A_est, r.B_est);
  std::fprintf(f, "bessel_ok,%d\nframe_ok,%d\n", r.bessel_ok, r.frame_ok);
  std::fprintf(f, "condition_c_checked,%d\ncondition_c_ok,%d\n",
               r.condition_c_checked, r.condition_c_ok);
  std::fprintf(f, "G00_min,%.17g\nG00_max,%.17g\n", r.G00_min, r.G00_max);
  std::fprintf(f, "rel_gap_A,%.17g\nrel_gap_B,%.17g\n", r.rel_gap_A, r.rel_gap_B);
  std::fprintf(f, "bounds_agree,%d\nrank,%d\n", r.bounds_agree, r.rank);
  std::fprintf(f, "eps_rank,%.17g\neps_supp,%.17g\nedge_tol,%.17g\n", r.eps_rank,
               r.eps_supp, r.edge_tol);
  std::fprintf(f, "bessel_verdict,%s\n", r.bessel_verdict.c_str());
  std::string mask;
  for (bool b : r.omega) mask += b ? '1' : '0';
  std::fprintf(f, "omega,%s\n", mask.c_str());
  std::fclose(f);
}

}  // namespace heis
