// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// Experiment configuration: one `key = value` per line, `#` starts a comment.
// Every key has a documented default; unknown keys raise ConfigError naming
// the key.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heis/core.hpp"
#include "heis/sampling.hpp"
#include "heis/siframe.hpp"
#include "heis/weyl.hpp"

namespace heis {

struct ExperimentConfig {
  // grid
  int n = 1;
  int delta_xi_inv = 4;  // q: y and xi spacing 1/q
  int delta_x_inv = 4;   // qx: x spacing 1/qx
  int N_x = 64;
  int N_xi = 64;         // y and xi sample count
  double T = 8.0;        // t in [-T, T)
  int N_t = 128;
  // lattice and lambda quadrature
  int K = 2;
  double Lambda = 4.0;
  int N_lambda = 128;    // positive nodes, dlambda = Lambda / N_lambda
  double lambda = 0.5;   // single-lambda subcommands
  double xi1 = 0.0, xi2 = 0.0;
  // weights
  int R = 8;
  int N_G = 16;
  int Kkl = 1;           // weight channels |k|,|l| <= Kkl
  std::string weight_form = "kernel";  // kernel | operator
  // tolerances
  double eps_cc = 1e-8;
  double eps_supp = 1e-8;   // relative to max G_00
  double eps_rank = 1e-10;
  double recon_tol = 1e-3;
  double plancherel_tol = 1e-4;
  double flambda_tol = 1e-8;
  // generator
  std::string generator = "gaussian";  // gaussian | cell_bump | tensor
  double wx = 1.0, wy = 1.0, wt = 1.0;
  std::string tensor_path;
  // seeded coefficients: |k|,|l| <= c_kl, |m| <= c_m
  std::uint64_t seed = 1;
  int c_kl = 1;
  int c_m = 1;
  // duals
  std::string dual_mode = "least-squares";  // least-squares | fiber-division
  std::string dual_setting = "general";     // general | v0
  int sigma = 0;          // 0 validates the sign, else +1 or -1
  int m_margin = 3;
  int psi_kl = 1;
  // inversion
  int points = 10;
  // selftest
  bool quick = false;
};

struct ConfigKey {
  std::string name;
  std::string doc;
};
// Every recognised key, in echo order.
const std::vector<ConfigKey>& config_keys();

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// Applies one key; ConfigError names the key on unknown keys or bad values.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
// Cross-key checks; ConfigError names the offending key.
void validate_config(const ExperimentConfig& cfg);
// `key = value` lines for every key, values printed round-trip exact.
std::string echo_config(const ExperimentConfig& cfg);

GridSpec config_grid(const ExperimentConfig& cfg);
LambdaGrid config_lambda_grid(const ExperimentConfig& cfg);
// The generator sampled on the configured grid (or read from tensor_path).
SampledFunction config_generator(const ExperimentConfig& cfg);
DualOptions config_dual_options(const ExperimentConfig& cfg);
WeightForm config_weight_form(const ExperimentConfig& cfg);

}  // namespace heis
