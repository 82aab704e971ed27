// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#include "heis/repn.hpp"

#include <algorithm>
#include <cmath>

namespace heis {

namespace {

void require_n1(const GroupElement& g) {
  if (g.n() != 1) throw DimensionMismatch("operators are implemented for n = 1");
}

void require_lambda(double lambda) {
  if (lambda == 0.0) throw DimensionMismatch("lambda must be nonzero");
}

void require_compatible(const OperatorMatrix& A, const OperatorMatrix& B) {
  if (!(A.xi == B.xi)) throw DimensionMismatch("operators on different xi grids");
  if (A.lambda != B.lambda) throw DimensionMismatch("operators at different lambda");
}

// Row phase of pi(g) at xi.
cplx repn_phase(double lambda, const GroupElement& g, double xi) {
  const double x = g.x[0], y = g.y[0];
  return std::polar(1.0, 2.0 * kPi * lambda * (g.t + x * xi + 0.5 * x * y));
}

}  // namespace

long grid_shift(double y, int q) {
  const double s = y * q;
  const double r = std::round(s);
  if (std::abs(s - r) > 1e-9)
    throw OffGridShift("shift " + std::to_string(y) + " is not a multiple of 1/" +
                       std::to_string(q));
  return static_cast<long>(r);
}

XiGrid symmetric_xi_grid(int q, double half) {
  const long h = static_cast<long>(std::ceil(half * q - 1e-9));
  return {q, -h, 2 * h + 1};
}

XiGrid union_grid(const XiGrid& a, const XiGrid& b) {
  if (a.q != b.q) throw DimensionMismatch("xi grids with different spacing");
  const long lo = std::min(a.i0, b.i0);
  const long hi = std::max(a.i0 + a.n, b.i0 + b.n);
  return {a.q, lo, hi - lo};
}

OperatorMatrix zero_operator(double lambda, const XiGrid& xi) {
  OperatorMatrix A;
  A.lambda = lambda;
  A.xi = xi;
  A.entries = Eigen::MatrixXcd::Zero(xi.n, xi.n);
  return A;
}

OperatorMatrix regrid(const OperatorMatrix& A, const XiGrid& xi) {
  if (A.xi.q != xi.q) throw DimensionMismatch("xi grids with different spacing");
  OperatorMatrix B = zero_operator(A.lambda, xi);
  B.kind = A.kind;
  const long lo = std::max(A.xi.i0, xi.i0);
  const long hi = std::min(A.xi.i0 + A.xi.n, xi.i0 + xi.n);
  if (hi <= lo) return B;
  const long len = hi - lo;
  B.entries.block(lo - xi.i0, lo - xi.i0, len, len) =
      A.entries.block(lo - A.xi.i0, lo - A.xi.i0, len, len);
  return B;
}

OperatorMatrix repn_matrix(double lambda, const GroupElement& g,
                           const XiGrid& xi) {
  require_n1(g);
  require_lambda(lambda);
  const long s = grid_shift(g.y[0], xi.q);
  OperatorMatrix M = zero_operator(lambda, xi);
  M.kind = OperatorKind::UnitaryRepn;
  for (long i = 0; i < xi.n; ++i) {
    const long j = i + s;
    if (j >= 0 && j < xi.n) M.entries(i, j) = repn_phase(lambda, g, xi.xi(i));
  }
  return M;
}

std::pair<OperatorMatrix, OperatorMatrix> repn_compose_check(
    double lambda, const GroupElement& g1, const GroupElement& g2,
    const XiGrid& xi) {
  return {compose(repn_matrix(lambda, g1, xi), repn_matrix(lambda, g2, xi)),
          repn_matrix(lambda, group_mul(g1, g2), xi)};
}

OperatorMatrix repn_apply_left(const GroupElement& g, const OperatorMatrix& A) {
  require_n1(g);
  const long s = grid_shift(g.y[0], A.xi.q);
  OperatorMatrix B = zero_operator(A.lambda, A.xi);
  B.kind = A.kind;
  const long n = A.xi.n;
  for (long i = 0; i < n; ++i) {
    const long j = i + s;
    if (j < 0 || j >= n) continue;
    B.entries.row(i) = repn_phase(A.lambda, g, A.xi.xi(i)) * A.entries.row(j);
  }
  return B;
}

OperatorMatrix repn_apply_right(const OperatorMatrix& A, const GroupElement& g) {
  require_n1(g);
  const long s = grid_shift(g.y[0], A.xi.q);
  OperatorMatrix B = zero_operator(A.lambda, A.xi);
  B.kind = A.kind;
  const long n = A.xi.n;
  // (A M)(:, j) = A(:, i) * phase(i) where j = i + s.
  for (long i = 0; i < n; ++i) {
    const long j = i + s;
    if (j < 0 || j >= n) continue;
    B.entries.col(j) = A.entries.col(i) * repn_phase(A.lambda, g, A.xi.xi(i));
  }
  return B;
}

cplx repn_trace_adjoint(const GroupElement& g, const OperatorMatrix& A) {
  require_n1(g);
  const long s = grid_shift(g.y[0], A.xi.q);
  // tr(M^* A) = sum_i conj(M(i, i+s)) A(i, i+s)
  cplx tr = 0.0;
  for (long i = 0; i < A.xi.n; ++i) {
    const long j = i + s;
    if (j < 0 || j >= A.xi.n) continue;
    tr += std::conj(repn_phase(A.lambda, g, A.xi.xi(i))) * A.entries(i, j);
  }
  return tr;
}

OperatorMatrix compose(const OperatorMatrix& A, const OperatorMatrix& B) {
  require_compatible(A, B);
  OperatorMatrix C;
  C.lambda = A.lambda;
  C.xi = A.xi;
  C.entries = A.entries * B.entries;
  C.kind = (A.kind == OperatorKind::UnitaryRepn &&
            B.kind == OperatorKind::UnitaryRepn)
               ? OperatorKind::UnitaryRepn
               : OperatorKind::IntegralKernel;
  return C;
}

OperatorMatrix adjoint(const OperatorMatrix& A) {
  OperatorMatrix B = A;
  B.entries = A.entries.adjoint();
  return B;
}

cplx trace(const OperatorMatrix& A) { return A.entries.trace(); }

}  // namespace heis
