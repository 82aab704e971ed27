// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// Sampling on the lattice {(2k, l, m)}:
//   P_{k,l}(lambda) = sum_m phi(2k, l, m) e^{2 pi i m lambda},
//   alpha_{2k,l,m} = (g_{2k,l} *_d phi~)(2k, l, m),  g_{2k,l} = sum_m c L_(2k,l,m) phi,
//   f = sum alpha_p L_p psi          (general reconstruction),
//   f = sum_m f(0,0,m) L_(0,0,m) psi (central sampling on V0(phi)).
// The dual psi is built either by dividing phi^(lambda) by the symbol or by
// least squares over a finite test basis.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heis/core.hpp"
#include "heis/weyl.hpp"

namespace heis {

struct SymbolP {
  std::vector<double> nodes;
  int K = 0;
  std::map<std::pair<int, int>, std::vector<cplx>> P;
  std::vector<double> norm2;  // ||P(lambda)||^2 over the (k,l) box
  std::vector<cplx> P0;       // P_{0,0}

  const std::vector<cplx>& at(int k, int l) const { return P.at({k, l}); }
};

SymbolP p_symbol(const LatticeSamples& s, const std::vector<double>& nodes);

struct PNormReport {
  double A_P = 0.0, B_P = 0.0;
  double off_mask_max = 0.0;
  double eps = 0.0;
  bool ok = false;
};
// A_P, B_P over masked nodes; ok iff A_P > eps and the symbol is <= eps off
// the mask. central_only uses |P_00|^2 (the V0 setting).
PNormReport p_norm_check(const SymbolP& P, const std::vector<bool>& mask,
                         double eps = 1e-8, bool central_only = false);

// (g *_d h)(p) = sum_{p''} g(p p''^-1) h(p''), out-of-box terms are zero.
cplx discrete_convolve_lattice(const LatticeSamples& g, const LatticeSamples& h, Lat p);

// f(X) at a lattice point read from the grid, 0 off the grid.
cplx lattice_value(const SampledFunction& f, Lat p);

// f(0, 0, m) for |m| <= K as a lattice array that vanishes off the centre.
LatticeSamples central_samples(const SampledFunction& f, int K);

CoeffArray alpha_coeffs(const CoeffArray& c, const SampledFunction& phi, int K);

enum class DualMode { FiberDivision, LeastSquares };
enum class DualSetting { V0, General };

std::string to_string(DualMode m);
std::string to_string(DualSetting s);

struct DualOptions {
  DualMode mode = DualMode::LeastSquares;
  DualSetting setting = DualSetting::General;
  int m_margin = 3;           // test basis |m| <= K - m_margin
  int psi_kl = 1;             // least-squares ansatz |k|,|l| <= psi_kl, |m| <= K
  double cond_max = 1e12;     // IllConditioned above this
  int NG = 16;                // nodes for the support set
  double eps_supp_rel = 1e-8; // support threshold relative to max G_00
  double eps_symbol = 1e-8;   // symbol floor on the support
  std::optional<int> sigma;   // fiber division sign; validated when unset
  std::optional<LambdaGrid> lambdas;  // inversion grid (default: full t band)
  double residual_bound = 1e-3;
};

struct DualGenerator {
  SampledFunction psi;
  DualMode mode = DualMode::LeastSquares;
  DualSetting setting = DualSetting::General;
  int K = 0;
  int sigma = 1;
  double residual = 0.0;  // max relative error over the test basis
  double residual_other_sigma = -1.0;  // fiber division: the rejected sign
  double condition = 0.0;              // least squares normal equations
  double A_P = 0.0, B_P = 0.0;         // symbol bounds on the support
  bool accepted = false;               // residual <= residual_bound
  std::optional<CoeffArray> coeffs;    // psi = sum d_r L_r phi when known
  std::vector<double> test_residuals;  // one per central test offset m
};

DualGenerator build_dual_generator(const SampledFunction& phi, int K,
                                   const DualOptions& opt = {});

// sum alpha(c)_p L_p psi.
SampledFunction reconstruct(const CoeffArray& c, const SampledFunction& phi,
                            const DualGenerator& psi, const TranslateOptions& opt = {});

// sum_m fsamp(0,0,m) L_(0,0,m) psi.
SampledFunction sample_reconstruct_v0(const LatticeSamples& fsamp, const DualGenerator& psi,
                                      const TranslateOptions& opt = {});

}  // namespace heis
