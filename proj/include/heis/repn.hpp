// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// Discretized operators on L2(R) and the Schrodinger representation
//   pi_lambda(x,y,t) v(xi) = e^{2 pi i lambda t} e^{2 pi i lambda (x xi + x y/2)} v(xi + y)
// as monomial matrices on a xi grid of spacing 1/q. Shifts are zero-padded.

#pragma once

#include <Eigen/Dense>
#include <utility>

#include "heis/core.hpp"

namespace heis {

// xi_i = (i0 + i) / q for i in [0, n).
struct XiGrid {
  int q = 4;
  long i0 = 0;
  long n = 0;

  double xi(long i) const { return static_cast<double>(i0 + i) / q; }
  bool operator==(const XiGrid&) const = default;
};

// Symmetric grid covering [-half, half].
XiGrid symmetric_xi_grid(int q, double half);
// Smallest grid containing both.
XiGrid union_grid(const XiGrid& a, const XiGrid& b);

enum class OperatorKind { UnitaryRepn, IntegralKernel };

// Integral-kernel entries hold K(xi, eta) * dxi, so matrix products compose
// operators and the matrix trace approximates the operator trace.
struct OperatorMatrix {
  double lambda = 1.0;
  XiGrid xi;
  Eigen::MatrixXcd entries;
  OperatorKind kind = OperatorKind::IntegralKernel;

  long dim() const { return xi.n; }
};

OperatorMatrix zero_operator(double lambda, const XiGrid& xi);
// Re-express A on another xi grid (entries outside the overlap are zero).
OperatorMatrix regrid(const OperatorMatrix& A, const XiGrid& xi);

// Throws OffGridShift unless y is a multiple of 1/q.
OperatorMatrix repn_matrix(double lambda, const GroupElement& g,
                           const XiGrid& xi);
std::pair<OperatorMatrix, OperatorMatrix> repn_compose_check(
    double lambda, const GroupElement& g1, const GroupElement& g2,
    const XiGrid& xi);

// pi(g) A and A pi(g) in O(n^2) using the monomial structure.
OperatorMatrix repn_apply_left(const GroupElement& g, const OperatorMatrix& A);
OperatorMatrix repn_apply_right(const OperatorMatrix& A, const GroupElement& g);
// tr(pi(g)^* A) in O(n).
cplx repn_trace_adjoint(const GroupElement& g, const OperatorMatrix& A);

OperatorMatrix compose(const OperatorMatrix& A, const OperatorMatrix& B);
OperatorMatrix adjoint(const OperatorMatrix& A);
cplx trace(const OperatorMatrix& A);

// Grid shift y*q as an integer, or OffGridShift.
long grid_shift(double y, int q);

}  // namespace heis
