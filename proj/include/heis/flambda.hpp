// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// F_lambda(xi1, xi2) = pi(xi1, xi2, 0) f^(lambda) pi(-xi1, -xi2, 0), its
// integral form through the modulated fiber
//   e^{2 pi i lambda (x xi2 - y xi1)} f^lambda(x, y),
// the frame-coefficient expansion over lattice channels, and the inversion
//   f(u,v,w) = int |lambda| e^{2 pi i lambda (v xi1 - u xi2)}
//              tr(pi(u,v,w)^* F_lambda(xi1, xi2)) dlambda.

#pragma once

#include <vector>

#include "heis/core.hpp"
#include "heis/repn.hpp"
#include "heis/weyl.hpp"

namespace heis {

// Throws OffGridShift unless xi2 is a multiple of 1/q.
OperatorMatrix flambda_conjugation(const OperatorMatrix& fhat, double xi1, double xi2);

FiberFunction modulate_fiber(const FiberFunction& h, double xi1, double xi2);
OperatorMatrix flambda_integral(const FiberFunction& h, double lambda, double xi1,
                                double xi2, const KernelOptions& opt = {});

// (M f)(x, y, t) = e^{2 pi i (a x + b y)} f(x, y, t)
SampledFunction modulate(const SampledFunction& f, double a, double b);

// sum_p c_p e^{2 pi i lambda (2k xi2 - l xi1 + m)} Phi^M(2k, l) pi(2k, l, 0) with
// Phi^M(2k, l) the conjugation at (2k, l) of the transform of M_(lambda xi2,
// -lambda xi1) phi. All terms live on opt.xi (default: the automatic grid of
// the modulated phi widened by the box radius).
OperatorMatrix flambda_expansion(const CoeffArray& c, const SampledFunction& phi,
                                 double lambda, double xi1, double xi2,
                                 const KernelOptions& opt = {});

// F_lambda(xi1, xi2) on a lambda grid.
//
// The discrete trace sums xi over a 1/q grid, so it returns the fiber
// periodized in x with period q/|lambda|. Each lambda contributes only on
// the alias-free window |lambda (x - x_centre)| < q/2, which suffices when
// the fiber content lies inside that window.
struct FlambdaField {
  double xi1 = 0.0, xi2 = 0.0;
  double x_centre = 0.0;
  std::vector<double> lambdas;
  std::vector<double> weights;  // |lambda|^n dlambda
  std::vector<OperatorMatrix> ops;
};

FlambdaField flambda_field(const SampledFunction& f, const LambdaGrid& grid,
                           double xi1 = 0.0, double xi2 = 0.0);

// Needs v grid-aligned (OffGridShift otherwise).
cplx invert_pointwise(const FlambdaField& F, const GroupElement& p);
// The inversion at every grid point.
SampledFunction invert_grid(const FlambdaField& F, const GridSpec& grid);

// f(X) = int |lambda| sum_p c_p e^{2 pi i lambda m}
//        tr(pi(X)^* Phi(2k, l) pi(2k, l, 0)) dlambda,  Phi = conjugated phi^.
std::vector<cplx> reconstruct_corollary(const CoeffArray& c, const SampledFunction& phi,
                                        const LambdaGrid& grid,
                                        const std::vector<GroupElement>& points);

}  // namespace heis
