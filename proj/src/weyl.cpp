// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#include "heis/weyl.hpp"

#include <algorithm>
#include <cmath>

namespace heis {

namespace {

// Window edges sit a tiny irrational fraction of the band off the lattice of
// attainable frequencies, so rounding never decides membership.
constexpr double kEdgeShift = 0.6180339887498949e-9;

struct ColumnSpan {
  int iy;
  int lo, hi;  // nonzero x-index range, inclusive
};

std::vector<ColumnSpan> nonzero_columns(const FiberFunction& h) {
  std::vector<ColumnSpan> cols;
  const GridSpec& g = h.grid;
  for (int iy = 0; iy < g.Ny; ++iy) {
    int lo = -1, hi = -1;
    for (int ix = 0; ix < g.Nx; ++ix)
      if (h.at(ix, iy) != cplx(0.0)) {
        if (lo < 0) lo = ix;
        hi = ix;
      }
    if (lo >= 0) cols.push_back({iy, lo, hi});
  }
  return cols;
}

}  // namespace

double FiberFunction::norm2() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * grid.dx() * grid.dy();
}

FiberEvaluator::FiberEvaluator(const SampledFunction& f) : f_(&f) {
  const GridSpec& g = f.grid;
  for (int ix = 0; ix < g.Nx; ++ix)
    for (int iy = 0; iy < g.Ny; ++iy) {
      const cplx* c = &f.values[g.index(ix, iy, 0)];
      int lo = -1, hi = -1;
      for (int it = 0; it < g.Nt; ++it)
        if (c[it] != cplx(0.0)) {
          if (lo < 0) lo = it;
          hi = it;
        }
      if (lo >= 0) cols_.push_back({ix, iy, lo, hi});
    }
}

FiberFunction FiberEvaluator::operator()(double lambda) const {
  const GridSpec& g = f_->grid;
  FiberFunction h;
  h.lambda = lambda;
  h.grid = g;
  h.values.assign(static_cast<std::size_t>(g.Nx) * g.Ny, cplx(0.0));
  if (std::abs(lambda) >= 0.5 * g.pt()) return h;  // beyond the t band
  std::vector<cplx> ph(g.Nt);
  for (int it = 0; it < g.Nt; ++it)
    ph[it] = std::polar(g.dt(), 2.0 * kPi * lambda * g.t(it));
  for (const Column& c : cols_) {
    const cplx* v = &f_->values[g.index(c.ix, c.iy, 0)];
    cplx s = 0.0;
    for (int it = c.lo; it <= c.hi; ++it) s += v[it] * ph[it];
    h.at(c.ix, c.iy) = s;
  }
  return h;
}

FiberFunction t_fiber(const SampledFunction& f, double lambda) {
  return FiberEvaluator(f)(lambda);
}

double band_centre(const FiberFunction& h) {
  const GridSpec& g = h.grid;
  cplx r = 0.0;
  for (int ix = 0; ix + 1 < g.Nx; ++ix)
    for (int iy = 0; iy < g.Ny; ++iy) r += h.at(ix + 1, iy) * std::conj(h.at(ix, iy));
  if (r == cplx(0.0)) return 0.0;
  return std::arg(r) / (2.0 * kPi * g.dx());
}

XiGrid auto_xi_grid(const FiberFunction& h, double lambda, double margin,
                    std::optional<double> centre) {
  const GridSpec& g = h.grid;
  double ey = 0.0;
  for (const auto& c : nonzero_columns(h)) ey = std::max(ey, std::abs(g.y(c.iy)));
  const double W = 0.5 / g.dx();
  const double c = centre ? *centre : band_centre(h);
  const double half = (W + std::abs(c)) / std::abs(lambda) + 0.5 * ey + margin;
  return symmetric_xi_grid(g.q, half);
}

OperatorMatrix weyl_kernel(const FiberFunction& h, double lambda,
                           const KernelOptions& opt) {
  if (lambda == 0.0) throw DimensionMismatch("lambda must be nonzero");
  const GridSpec& g = h.grid;
  const double c = opt.centre ? *opt.centre : band_centre(h);
  const XiGrid xi = opt.xi ? *opt.xi : auto_xi_grid(h, lambda, opt.xi_margin, c);
  if (xi.q != g.q) throw DimensionMismatch("xi spacing must equal the y spacing");
  OperatorMatrix K = zero_operator(lambda, xi);
  K.kind = OperatorKind::IntegralKernel;
  const double W = 0.5 / g.dx();
  const double lo_edge = -W + kEdgeShift * W, hi_edge = W + kEdgeShift * W;
  const double wscale = g.dx() / g.q;  // dx quadrature times absorbed dxi
  const long n = xi.n;
  for (const ColumnSpan& col : nonzero_columns(h)) {
    const long d = col.iy - g.Ny / 2;  // (eta - xi) * q
    const double x0 = g.x(col.lo);
    for (long i = std::max(0L, -d); i < n && i + d < n; ++i) {
      const long ip = i + d;
      const double s = static_cast<double>(2 * xi.i0 + i + ip) / xi.q;
      const double w = 0.5 * lambda * s;
      const double shifted = w + c;
      if (!(shifted >= lo_edge && shifted < hi_edge)) continue;
      cplx ph = std::polar(1.0, 2.0 * kPi * x0 * w);
      const cplx step = std::polar(1.0, 2.0 * kPi * g.dx() * w);
      cplx acc = 0.0;
      for (int ix = col.lo; ix <= col.hi; ++ix) {
        acc += h.at(ix, col.iy) * ph;
        ph *= step;
      }
      K.entries(i, ip) = acc * wscale;
    }
  }
  return K;
}

OperatorMatrix group_ft(const SampledFunction& f, double lambda,
                        const KernelOptions& opt) {
  return weyl_kernel(t_fiber(f, lambda), lambda, opt);
}

cplx hs_inner(const OperatorMatrix& A, const OperatorMatrix& B) {
  if (!(A.xi == B.xi)) throw DimensionMismatch("hs_inner: different xi grids");
  if (A.lambda != B.lambda) throw DimensionMismatch("hs_inner: different lambda");
  // sum K_A conj(K_B) dxi^2 = sum entries_A conj(entries_B)
  return (A.entries.array() * B.entries.array().conjugate()).sum();
}

double hs_norm2(const OperatorMatrix& A) { return A.entries.squaredNorm(); }

double rel_hs_error(const OperatorMatrix& A, const OperatorMatrix& B) {
  if (!(A.xi == B.xi)) throw DimensionMismatch("rel_hs_error: different xi grids");
  const double den = B.entries.norm();
  const double num = (A.entries - B.entries).norm();
  return den > 0.0 ? num / den : num;
}

LambdaGrid make_lambda_grid(double Lambda, double dlambda, int n) {
  LambdaGrid g;
  g.Lambda = Lambda;
  g.dlambda = dlambda;
  const int J = static_cast<int>(std::lround(Lambda / dlambda));
  for (int j = J - 1; j >= 0; --j) g.nodes.push_back(-(j + 0.5) * dlambda);
  for (int j = 0; j < J; ++j) g.nodes.push_back((j + 0.5) * dlambda);
  for (double l : g.nodes) g.weights.push_back(std::pow(std::abs(l), n) * dlambda);
  return g;
}

std::vector<double> unit_interval_nodes(int NG) {
  std::vector<double> v(NG);
  for (int j = 0; j < NG; ++j) v[j] = (j + 0.5) / NG;
  return v;
}

double plancherel_norm(const SampledFunction& f, const LambdaGrid& grid) {
  const FiberEvaluator ev(f);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const double l = grid.nodes[i];
    s += hs_norm2(weyl_kernel(ev(l), l)) * grid.weights[i];
  }
  return std::sqrt(s);
}

}  // namespace heis
