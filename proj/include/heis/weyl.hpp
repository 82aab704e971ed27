// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// t-fibers f^lambda(z) = sum_t f(z,t) e^{2 pi i lambda t} dt, Weyl kernels
//   K(xi, eta) = sum_x h(x, eta - xi) e^{pi i lambda x (xi + eta)} dx,
// the group Fourier transform f^(lambda) = W_lambda(f^lambda), and the
// Plancherel quadrature over a punctured lambda grid.
//
// Both Riemann sums are periodic in their dual variable. They are read as
// integrals of the band-limited interpolant: t_fiber vanishes for
// |lambda| >= 1/(2 dt), and the kernel keeps |lambda (xi+eta)/2 + c| < 1/(2 dx)
// where c is the circular-mean x-frequency of h. Centring on c makes the
// window covariant under modulation, hence under lattice translation.

#pragma once

#include <optional>
#include <vector>

#include "heis/core.hpp"
#include "heis/repn.hpp"

namespace heis {

struct FiberFunction {
  double lambda = 0.0;
  GridSpec grid;
  std::vector<cplx> values;  // layout (ix, iy)

  cplx& at(int ix, int iy) { return values[static_cast<std::size_t>(ix) * grid.Ny + iy]; }
  cplx at(int ix, int iy) const {
    return values[static_cast<std::size_t>(ix) * grid.Ny + iy];
  }
  double norm2() const;  // sum |h|^2 dx dy
};

// Caches the nonzero t-range of every column so many lambdas are cheap.
class FiberEvaluator {
 public:
  explicit FiberEvaluator(const SampledFunction& f);
  FiberFunction operator()(double lambda) const;

 private:
  struct Column {
    int ix, iy, lo, hi;
  };
  const SampledFunction* f_;
  std::vector<Column> cols_;
};

FiberFunction t_fiber(const SampledFunction& f, double lambda);

// Circular-mean x-frequency of h (0 for h = 0).
double band_centre(const FiberFunction& h);

// The kernel is linear in h for a fixed band centre; with the automatic
// centre, linearity holds up to the out-of-band content of the summands.
struct KernelOptions {
  std::optional<XiGrid> xi;       // default: smallest grid holding the kernel
  std::optional<double> centre;   // default: band_centre(h)
  double xi_margin = 1.0;         // extra half-extent of the default grid
};

XiGrid auto_xi_grid(const FiberFunction& h, double lambda, double margin = 1.0,
                    std::optional<double> centre = std::nullopt);

OperatorMatrix weyl_kernel(const FiberFunction& h, double lambda,
                           const KernelOptions& opt = {});
OperatorMatrix group_ft(const SampledFunction& f, double lambda,
                        const KernelOptions& opt = {});

cplx hs_inner(const OperatorMatrix& A, const OperatorMatrix& B);
double hs_norm2(const OperatorMatrix& A);
// ||A - B||_HS / ||B||_HS
double rel_hs_error(const OperatorMatrix& A, const OperatorMatrix& B);

struct LambdaGrid {
  std::vector<double> nodes;
  std::vector<double> weights;  // |lambda|^n * dlambda
  double Lambda = 4.0;
  double dlambda = 1.0 / 32;
};

// Midpoint nodes +-(j + 1/2) dlambda, j = 0 .. Lambda/dlambda - 1.
LambdaGrid make_lambda_grid(double Lambda = 4.0, double dlambda = 1.0 / 32,
                            int n = 1);
// Midpoint nodes (j + 1/2)/N_G in (0, 1).
std::vector<double> unit_interval_nodes(int NG);

double plancherel_norm(const SampledFunction& f, const LambdaGrid& grid);

}  // namespace heis
