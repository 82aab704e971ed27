// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#include "heis/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace heis {

namespace {

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* what) {
  throw ConfigError("config key '" + key + "': " + what + " (got '" + value + "')");
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad(key, v, "expected an integer");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    bad(key, v, "expected an unsigned integer");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  // accepts p/q fractions such as 1/32
  const auto slash = v.find('/');
  if (slash != std::string::npos) {
    const double den = to_double(key, trim(v.substr(slash + 1)));
    if (den == 0.0) throw ConfigError("config key '" + key + "': zero denominator in '" + v + "'");
    return to_double(key, trim(v.substr(0, slash))) / den;
  }
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    bad(key, v, "expected a number");
  }
  if (used != v.size()) bad(key, v, "expected a number");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  bad(key, v, "expected true or false");
}

std::string one_of(const std::string& key, const std::string& v,
                   std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return v;
  bad(key, v, "value not recognised");
}

struct Entry {
  ConfigKey key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define HEIS_INT(field, doc)                                                              \
  Entry {                                                                                 \
    {#field, doc}, [](ExperimentConfig& c, const std::string& v) { c.field = to_int(#field, v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.field); }                 \
  }
#define HEIS_DBL(field, doc)                                                              \
  Entry {                                                                                 \
    {#field, doc},                                                                        \
        [](ExperimentConfig& c, const std::string& v) { c.field = to_double(#field, v); }, \
        [](const ExperimentConfig& c) { return fmt(c.field); }                            \
  }
#define HEIS_STR(field, doc, ...)                                                         \
  Entry {                                                                                 \
    {#field, doc},                                                                        \
        [](ExperimentConfig& c, const std::string& v) { c.field = one_of(#field, v, {__VA_ARGS__}); }, \
        [](const ExperimentConfig& c) { return c.field; }                                 \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      HEIS_INT(n, "dimension; only n = 1 is supported (default 1)"),
      HEIS_INT(delta_xi_inv, "q: y and xi spacing 1/q (default 4)"),
      HEIS_INT(delta_x_inv, "qx: x spacing 1/qx (default 4)"),
      HEIS_INT(N_x, "x samples, centred (default 64)"),
      HEIS_INT(N_xi, "y samples, centred; also the xi spacing reference (default 64)"),
      HEIS_DBL(T, "t range [-T, T) (default 8)"),
      HEIS_INT(N_t, "t samples; 2T/N_t must be 1/integer (default 128)"),
      HEIS_INT(K, "lattice box |k|,|l|,|m| <= K (default 2)"),
      HEIS_DBL(Lambda, "lambda quadrature range [-Lambda, Lambda] (default 4)"),
      HEIS_INT(N_lambda, "positive lambda nodes, dlambda = Lambda/N_lambda (default 128)"),
      HEIS_DBL(lambda, "lambda for single-lambda subcommands (default 0.5)"),
      HEIS_DBL(xi1, "conjugation point xi1 (default 0)"),
      HEIS_DBL(xi2, "conjugation point xi2, a multiple of 1/q (default 0)"),
      HEIS_INT(R, "weight sums over |r| <= R (default 8)"),
      HEIS_INT(N_G, "nodes (j + 1/2)/N_G on (0, 1) (default 16)"),
      HEIS_INT(Kkl, "weight channels |k|,|l| <= Kkl (default 1)"),
      HEIS_STR(weight_form, "kernel | operator (default kernel)", "kernel", "operator"),
      HEIS_DBL(eps_cc, "condition C tolerance on |G_kl|, (k,l) != 0 (default 1e-8)"),
      HEIS_DBL(eps_supp, "support threshold relative to max G_00 (default 1e-8)"),
      HEIS_DBL(eps_rank, "Gram rank cutoff relative to the top eigenvalue (default 1e-10)"),
      HEIS_DBL(recon_tol, "relative reconstruction tolerance (default 1e-3)"),
      HEIS_DBL(plancherel_tol, "Plancherel ratio tolerance (default 1e-4)"),
      HEIS_DBL(flambda_tol, "conjugation vs integral tolerance (default 1e-8)"),
      HEIS_STR(generator, "gaussian | cell_bump | tensor (default gaussian)", "gaussian",
               "cell_bump", "tensor"),
      HEIS_DBL(wx, "Gaussian x width (default 1)"),
      HEIS_DBL(wy, "Gaussian y width (default 1)"),
      HEIS_DBL(wt, "Gaussian and bump t width (default 1)"),
      Entry{{"tensor_path", "generator tensor file; its grid overrides the grid keys"},
            [](ExperimentConfig& c, const std::string& v) { c.tensor_path = v; },
            [](const ExperimentConfig& c) { return c.tensor_path; }},
      Entry{{"seed", "mt19937_64 seed for coefficients (default 1)"},
            [](ExperimentConfig& c, const std::string& v) { c.seed = to_u64("seed", v); },
            [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      HEIS_INT(c_kl, "seeded coefficients |k|,|l| <= c_kl (default 1)"),
      HEIS_INT(c_m, "seeded coefficients |m| <= c_m (default 1)"),
      HEIS_STR(dual_mode, "least-squares | fiber-division (default least-squares)",
               "least-squares", "fiber-division"),
      HEIS_STR(dual_setting, "general | v0 (default general)", "general", "v0"),
      HEIS_INT(sigma, "fiber-division sign: 0 validates, or +1 / -1 (default 0)"),
      HEIS_INT(m_margin, "test basis |m| <= K - m_margin, capped at K (default 3)"),
      HEIS_INT(psi_kl, "least-squares ansatz |k|,|l| <= psi_kl (default 1)"),
      HEIS_INT(points, "inversion test points (default 10)"),
      Entry{{"quick", "selftest runs the fast subset (default false)"},
            [](ExperimentConfig& c, const std::string& v) { c.quick = to_bool("quick", v); },
            [](const ExperimentConfig& c) { return std::string(c.quick ? "true" : "false"); }},
  };
  return e;
}

#undef HEIS_INT
#undef HEIS_DBL
#undef HEIS_STR

}  // namespace

void validate_config(const ExperimentConfig& c) {
  if (c.n != 1) throw ConfigError("config key 'n': only n = 1 is supported");
  if (c.sigma != 0 && c.sigma != 1 && c.sigma != -1)
    throw ConfigError("config key 'sigma': must be 0, 1 or -1");
  if (c.K < 0) throw ConfigError("config key 'K': must be >= 0");
  if (c.N_lambda <= 0) throw ConfigError("config key 'N_lambda': must be positive");
  if (c.Lambda <= 0) throw ConfigError("config key 'Lambda': must be positive");
  if (c.N_G <= 0) throw ConfigError("config key 'N_G': must be positive");
  if (c.points < 0) throw ConfigError("config key 'points': must be >= 0");
  if (c.generator == "tensor" && c.tensor_path.empty())
    throw ConfigError("config key 'tensor_path': required by generator = tensor");
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const Entry& e : entries()) k.push_back(e.key);
    return k;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const Entry& e : entries())
    if (e.key.name == key) {
      e.set(cfg, value);
      return;
    }
  throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string echo_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const Entry& e : entries()) out += e.key.name + " = " + e.get(cfg) + "\n";
  return out;
}

GridSpec config_grid(const ExperimentConfig& cfg) {
  GridSpec g;
  g.n = cfg.n;
  g.q = cfg.delta_xi_inv;
  g.qx = cfg.delta_x_inv;
  g.Nx = cfg.N_x;
  g.Ny = cfg.N_xi;
  g.T = cfg.T;
  g.Nt = cfg.N_t;
  try {
    g.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("grid keys: ") + e.what());
  }
  return g;
}

LambdaGrid config_lambda_grid(const ExperimentConfig& cfg) {
  return make_lambda_grid(cfg.Lambda, cfg.Lambda / cfg.N_lambda, cfg.n);
}

SampledFunction config_generator(const ExperimentConfig& cfg) {
  if (cfg.generator == "tensor") return read_tensor(cfg.tensor_path);
  const GridSpec g = config_grid(cfg);
  if (cfg.generator == "cell_bump") return sample(cell_bump(cfg.wt), g);
  return sample(gaussian(cfg.wx, cfg.wy, cfg.wt), g);
}

DualOptions config_dual_options(const ExperimentConfig& cfg) {
  DualOptions o;
  o.mode = cfg.dual_mode == "fiber-division" ? DualMode::FiberDivision : DualMode::LeastSquares;
  o.setting = cfg.dual_setting == "v0" ? DualSetting::V0 : DualSetting::General;
  if (cfg.sigma != 0) o.sigma = cfg.sigma;
  o.m_margin = std::min(cfg.m_margin, cfg.K);  // small K keeps the central test only
  o.psi_kl = cfg.psi_kl;
  o.NG = cfg.N_G;
  o.eps_supp_rel = cfg.eps_supp;
  o.residual_bound = cfg.recon_tol;
  return o;
}

WeightForm config_weight_form(const ExperimentConfig& cfg) {
  return cfg.weight_form == "operator" ? WeightForm::Operator : WeightForm::Kernel;
}

}  // namespace heis
