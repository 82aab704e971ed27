// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#include "heis/flambda.hpp"

#include <cmath>

namespace heis {

namespace {

XiGrid widened(XiGrid xi, int rows) {
  xi.i0 -= rows;
  xi.n += 2L * rows;
  return xi;
}

// sum_m c(k,l,m) e^{2 pi i lambda m}
cplx channel_symbol(const CoeffArray& c, int k, int l, double lambda) {
  cplx s = 0.0;
  for (int m = -c.K; m <= c.K; ++m) {
    const cplx v = c.at(k, l, m);
    if (v != cplx(0.0)) s += v * std::polar(1.0, 2.0 * kPi * lambda * m);
  }
  return s;
}

bool in_alias_window(double lambda, double x, double xc, int q) {
  return std::abs(lambda * (x - xc)) < 0.5 * q;
}

}  // namespace

OperatorMatrix flambda_conjugation(const OperatorMatrix& fhat, double xi1, double xi2) {
  const GroupElement g(xi1, xi2, 0.0), ginv(-xi1, -xi2, 0.0);
  return repn_apply_right(repn_apply_left(g, fhat), ginv);
}

FiberFunction modulate_fiber(const FiberFunction& h, double xi1, double xi2) {
  FiberFunction m = h;
  const GridSpec& g = h.grid;
  const double lam = h.lambda;
  for (int ix = 0; ix < g.Nx; ++ix)
    for (int iy = 0; iy < g.Ny; ++iy) {
      cplx& v = m.at(ix, iy);
      if (v != cplx(0.0))
        v *= std::polar(1.0, 2.0 * kPi * lam * (g.x(ix) * xi2 - g.y(iy) * xi1));
    }
  return m;
}

OperatorMatrix flambda_integral(const FiberFunction& h, double lambda, double xi1,
                                double xi2, const KernelOptions& opt) {
  FiberFunction hl = h;
  hl.lambda = lambda;
  return weyl_kernel(modulate_fiber(hl, xi1, xi2), lambda, opt);
}

SampledFunction modulate(const SampledFunction& f, double a, double b) {
  SampledFunction out = f;
  const GridSpec& g = f.grid;
  for (int ix = 0; ix < g.Nx; ++ix)
    for (int iy = 0; iy < g.Ny; ++iy) {
      const cplx ph = std::polar(1.0, 2.0 * kPi * (a * g.x(ix) + b * g.y(iy)));
      cplx* v = &out.values[g.index(ix, iy, 0)];
      for (int it = 0; it < g.Nt; ++it) v[it] *= ph;
    }
  return out;
}

OperatorMatrix flambda_expansion(const CoeffArray& c, const SampledFunction& phi,
                                 double lambda, double xi1, double xi2,
                                 const KernelOptions& opt) {
  const SampledFunction mphi = modulate(phi, lambda * xi2, -lambda * xi1);
  const FiberFunction h = t_fiber(mphi, lambda);
  KernelOptions ko = opt;
  if (!ko.xi) {
    const double c0 = ko.centre ? *ko.centre : band_centre(h);
    ko.xi = widened(auto_xi_grid(h, lambda, ko.xi_margin, c0),
                    (c.K + 1) * phi.grid.q);
  }
  const OperatorMatrix base = weyl_kernel(h, lambda, ko);
  OperatorMatrix F = zero_operator(lambda, *ko.xi);
  for (int k = -c.K; k <= c.K; ++k)
    for (int l = -c.K; l <= c.K; ++l) {
      const cplx C = channel_symbol(c, k, l, lambda);
      if (C == cplx(0.0)) continue;
      const cplx ph = std::polar(1.0, 2.0 * kPi * lambda * (2.0 * k * xi2 - l * xi1));
      const OperatorMatrix term = repn_apply_right(
          flambda_conjugation(base, 2.0 * k, l), GroupElement(2.0 * k, l, 0.0));
      F.entries += (C * ph) * term.entries;
    }
  return F;
}

FlambdaField flambda_field(const SampledFunction& f, const LambdaGrid& grid,
                           double xi1, double xi2) {
  FlambdaField F;
  F.xi1 = xi1;
  F.xi2 = xi2;
  F.lambdas = grid.nodes;
  F.weights = grid.weights;
  const FiberEvaluator ev(f);
  for (double lam : grid.nodes) F.ops.push_back(flambda_integral(ev(lam), lam, xi1, xi2));
  return F;
}

cplx invert_pointwise(const FlambdaField& F, const GroupElement& p) {
  const double u = p.x[0], v = p.y[0];
  cplx s = 0.0;
  for (std::size_t j = 0; j < F.ops.size(); ++j) {
    const double lam = F.lambdas[j];
    if (!in_alias_window(lam, u, F.x_centre, F.ops[j].xi.q)) continue;
    const cplx ph = std::polar(1.0, 2.0 * kPi * lam * (v * F.xi1 - u * F.xi2));
    s += F.weights[j] * ph * repn_trace_adjoint(p, F.ops[j]);
  }
  return s;
}

SampledFunction invert_grid(const FlambdaField& F, const GridSpec& grid) {
  SampledFunction out(grid);
  const std::size_t nz = static_cast<std::size_t>(grid.Nx) * grid.Ny;
  std::vector<cplx> tr(nz), et(grid.Nt);
  for (std::size_t j = 0; j < F.ops.size(); ++j) {
    const OperatorMatrix& A = F.ops[j];
    const double lam = F.lambdas[j];
    if (A.xi.q != grid.q) throw DimensionMismatch("invert_grid: xi spacing differs from y");
    const long n = A.xi.n;
    for (int ix = 0; ix < grid.Nx; ++ix) {
      const double x = grid.x(ix);
      if (!in_alias_window(lam, x, F.x_centre, grid.q)) {
        for (int iy = 0; iy < grid.Ny; ++iy) tr[static_cast<std::size_t>(ix) * grid.Ny + iy] = 0.0;
        continue;
      }
      for (int iy = 0; iy < grid.Ny; ++iy) {
        const double y = grid.y(iy);
        const long s = iy - grid.Ny / 2;
        // conj of e^{2 pi i lam (x xi + x y / 2)} by recurrence in xi
        const long i_lo = std::max(0L, -s), i_hi = std::min(n, n - s);
        cplx acc = 0.0;
        if (i_lo < i_hi) {
          cplx ph = std::polar(1.0, -2.0 * kPi * lam * (x * A.xi.xi(i_lo) + 0.5 * x * y));
          const cplx step = std::polar(1.0, -2.0 * kPi * lam * x / A.xi.q);
          for (long i = i_lo; i < i_hi; ++i) {
            acc += ph * A.entries(i, i + s);
            ph *= step;
          }
        }
        const cplx mod = std::polar(1.0, 2.0 * kPi * lam * (y * F.xi1 - x * F.xi2));
        tr[static_cast<std::size_t>(ix) * grid.Ny + iy] = F.weights[j] * mod * acc;
      }
    }
    for (int it = 0; it < grid.Nt; ++it)
      et[it] = std::polar(1.0, -2.0 * kPi * lam * grid.t(it));
    for (std::size_t z = 0; z < nz; ++z) {
      if (tr[z] == cplx(0.0)) continue;
      cplx* o = &out.values[z * grid.Nt];
      for (int it = 0; it < grid.Nt; ++it) o[it] += tr[z] * et[it];
    }
  }
  return out;
}

std::vector<cplx> reconstruct_corollary(const CoeffArray& c, const SampledFunction& phi,
                                        const LambdaGrid& grid,
                                        const std::vector<GroupElement>& points) {
  std::vector<cplx> vals(points.size(), 0.0);
  const FiberEvaluator ev(phi);
  for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
    const double lam = grid.nodes[j];
    const FiberFunction h = ev(lam);
    KernelOptions ko;
    ko.xi = widened(auto_xi_grid(h, lam), (c.K + 1) * phi.grid.q);
    const OperatorMatrix phat = weyl_kernel(h, lam, ko);
    for (int k = -c.K; k <= c.K; ++k)
      for (int l = -c.K; l <= c.K; ++l) {
        const cplx C = channel_symbol(c, k, l, lam);
        if (C == cplx(0.0)) continue;
        const OperatorMatrix B = repn_apply_right(flambda_conjugation(phat, 2.0 * k, l),
                                                  GroupElement(2.0 * k, l, 0.0));
        // channel content is centred at x = 2k
        for (std::size_t a = 0; a < points.size(); ++a)
          if (in_alias_window(lam, points[a].x[0], 2.0 * k, phi.grid.q))
            vals[a] += grid.weights[j] * C * repn_trace_adjoint(points[a], B);
      }
  }
  return vals;
}

}  // namespace heis
