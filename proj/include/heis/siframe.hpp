// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// Frame diagnostics for the lattice translates {L_p phi}:
//   G_{k,l}(lambda) = sum_r <phi^(lambda+r), (L_(2k,l,0) phi)^(lambda+r)>_HS |lambda+r|
// in operator and kernel forms, Condition C, Gram matrices of a truncated
// lattice box, frame-bound estimates and canonical dual coefficients.

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "heis/core.hpp"
#include "heis/weyl.hpp"

namespace heis {

struct WeightOptions {
  int R = 8;               // |r| <= R
  double stop_rel = 1e-12; // stop once a +-r pair is below stop_rel * sum |terms|
};

enum class WeightForm { Operator, Kernel };

cplx weight_G_operator(const SampledFunction& phi, int k, int l, double lambda,
                       const WeightOptions& opt = {});
cplx weight_G_kernel(const SampledFunction& phi, int k, int l, double lambda,
                     const WeightOptions& opt = {});

struct WeightTable {
  std::string phi_id;
  std::vector<double> nodes;  // in (0, 1)
  int R = 8;
  std::map<std::pair<int, int>, std::vector<cplx>> values;

  const std::vector<cplx>& at(int k, int l) const { return values.at({k, l}); }
};

// All channels with |k|, |l| <= Kkl at every node.
WeightTable weight_table(const SampledFunction& phi, int Kkl,
                         const std::vector<double>& nodes, WeightForm form,
                         const WeightOptions& opt = {},
                         const std::string& phi_id = "phi");
// Only the (0,0) channel.
std::vector<double> weight_G00(const SampledFunction& phi,
                               const std::vector<double>& nodes,
                               const WeightOptions& opt = {});

struct ConditionCReport {
  bool ok = true;
  double max_violation = 0.0;
  int k = 0, l = 0;
  double lambda = 0.0;
  double eps = 0.0;
};
// max over (k,l) != (0,0), |k|,|l| <= Kcc, and nodes of |G_{k,l}| <= eps.
ConditionCReport condition_c(const WeightTable& table, int Kcc, double eps);
ConditionCReport condition_c(const SampledFunction& phi, int Kcc, double eps,
                             const std::vector<double>& nodes,
                             const WeightOptions& opt = {});

// Lattice box points in LatticeArray order.
std::vector<Lat> box_points(int K);

struct GramMatrix {
  int K = 0;
  Eigen::MatrixXcd entries;
  double hermitian_error = 0.0;
};

// <L_p phi, L_p' phi> = <phi, L_{p^-1 p'} phi> from grid index arithmetic.
GramMatrix gram_matrix(const SampledFunction& phi, int K,
                       const TranslateOptions& opt = {});
GramMatrix gram_from_matrix(const Eigen::MatrixXcd& m, int K);

// Memoised offset inner products <phi, L_q phi>.
class TranslateTable {
 public:
  explicit TranslateTable(const SampledFunction& phi);
  cplx operator()(Lat q);
  double norm2() const { return sparse_.norm2; }

 private:
  const SampledFunction* phi_;
  SparseFunction sparse_;
  std::map<std::tuple<int, int, int>, cplx> cache_;
};

std::vector<bool> omega_support(const std::vector<double>& G00, double eps_supp);
// Mask value at any real lambda by 1-periodic extension of the node mask.
bool omega_at(const std::vector<bool>& mask, const std::vector<double>& nodes,
              double lambda);

struct FrameReport {
  double A_est = 0.0, B_est = 0.0;
  bool bessel_ok = false;
  bool frame_ok = false;
  bool condition_c_ok = false;
  bool condition_c_checked = false;
  std::vector<bool> omega;
  double G00_min = 0.0, G00_max = 0.0;
  double rel_gap_A = 0.0, rel_gap_B = 0.0;
  bool bounds_agree = false;  // both gaps within edge_tol
  double eps_rank = 0.0, eps_supp = 0.0, edge_tol = 0.1;
  int rank = 0;
  std::string bessel_verdict;
};

FrameReport frame_bounds(const GramMatrix& gram, double eps_rank);
// Cross-check against G_00 on Omega.
FrameReport frame_bounds(const GramMatrix& gram, double eps_rank,
                         const std::vector<double>& G00, double eps_supp_rel,
                         double edge_tol = 0.1);

// G^+ target via eigendecomposition with cutoff eps_rank * max eigenvalue.
CoeffArray canonical_dual_coeffs(const GramMatrix& gram, const CoeffArray& target,
                                 double eps_rank = 1e-10);

void write_weight_csv(const WeightTable& t, const std::string& path);
void write_frame_report_csv(const FrameReport& r, const std::string& path);

}  // namespace heis
