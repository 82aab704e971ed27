// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#include "heis/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <utility>

#include "heis/acceptance.hpp"
#include "heis/flambda.hpp"
#include "heis/rng.hpp"
#include "heis/sampling.hpp"
#include "heis/siframe.hpp"

namespace heis {

namespace {

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

using KeyValues = std::vector<std::pair<std::string, double>>;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw IoError("cannot write " + path);
  o << text;
  if (!o) throw IoError("write failed: " + path);
}

void write_kv(const std::string& path, const KeyValues& kv) {
  std::string s = "key,value\n";
  for (const auto& [k, v] : kv) s += k + "," + fmt(v) + "\n";
  write_text(path, s);
}

struct Outcome {
  bool pass = true;
  std::string summary;  // one line for stdout
};

struct Context {
  const ExperimentConfig& cfg;
  std::string dir;
  std::string path(const std::string& name) const { return dir + "/" + name; }
};

CoeffArray seeded_coeffs(const ExperimentConfig& cfg, int Rkl, int Rm) {
  Rng rng(cfg.seed);
  CoeffArray c(cfg.K);
  Rkl = std::min(Rkl, cfg.K);
  Rm = std::min(Rm, cfg.K);
  for (int k = -Rkl; k <= Rkl; ++k)
    for (int l = -Rkl; l <= Rkl; ++l)
      for (int m = -Rm; m <= Rm; ++m) c.at(k, l, m) = rng.cuniform();
  return c;
}

// Seeded grid points with |x| <= hx, |y| <= hy, |t| <= ht, clamped to the grid.
std::vector<std::array<int, 3>> seeded_points(const GridSpec& g, std::uint64_t seed, int count,
                                              double hx, double hy, double ht) {
  Rng rng(seed);
  std::vector<std::array<int, 3>> pts;
  auto pick = [&](int N, double h, double step) {
    const int i = N / 2 + static_cast<int>(std::lround(rng.symmetric() * h / step));
    return std::clamp(i, 0, N - 1);
  };
  for (int i = 0; i < count; ++i) {
    const int ix = pick(g.Nx, hx, g.dx());
    const int iy = pick(g.Ny, hy, g.dy());
    const int it = pick(g.Nt, ht, g.dt());
    pts.push_back({ix, iy, it});
  }
  return pts;
}

ReportTable point_table() {
  return {{"x", "y", "t", "re", "im", "re_ref", "im_ref", "abs_error"}, {}};
}

void add_point(ReportTable& t, const GridSpec& g, const std::array<int, 3>& i, cplx v, cplx ref) {
  t.rows.push_back({g.x(i[0]), g.y(i[1]), g.t(i[2]), v.real(), v.imag(), ref.real(), ref.imag(),
                    std::abs(v - ref)});
}

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", v);
  return b;
}

// ------------------------------------------------------------ subcommands

Outcome run_plancherel(const Context& c) {
  const SampledFunction f = config_generator(c.cfg);
  const LambdaGrid lg = config_lambda_grid(c.cfg);
  const FiberEvaluator ev(f);
  ReportTable density{{"lambda", "abs_lambda_hs_norm2"}, {}};
  double s = 0.0;
  for (std::size_t j = 0; j < lg.nodes.size(); ++j) {
    const double lam = lg.nodes[j];
    const double h2 = hs_norm2(weyl_kernel(ev(lam), lam));
    s += h2 * lg.weights[j];
    density.rows.push_back({lam, std::abs(lam) * h2});
  }
  const double p = std::sqrt(s), n = std::sqrt(f.norm2());
  const double err = std::abs(p / n - 1.0);
  write_kv(c.path("plancherel.csv"),
           {{"l2_norm", n}, {"plancherel_norm", p}, {"abs_ratio_minus_1", err},
            {"tol", c.cfg.plancherel_tol}});
  emit_report(density, ReportFormat::PlotData, c.path("plancherel_density.plot.csv"));
  return {err <= c.cfg.plancherel_tol, "plancherel |ratio - 1| = " + sci(err)};
}

Outcome run_weights(const Context& c) {
  const SampledFunction phi = config_generator(c.cfg);
  const std::vector<double> nodes = unit_interval_nodes(c.cfg.N_G);
  WeightOptions wo;
  wo.R = c.cfg.R;
  const WeightTable t =
      weight_table(phi, c.cfg.Kkl, nodes, config_weight_form(c.cfg), wo, c.cfg.generator);
  write_weight_csv(t, c.path("weights.csv"));
  ReportTable g00{{"lambda", "G00"}, {}};
  for (std::size_t a = 0; a < nodes.size(); ++a) g00.rows.push_back({nodes[a], t.at(0, 0)[a].real()});
  emit_report(g00, ReportFormat::PlotData, c.path("weights_G00.plot.csv"));
  return {true, "weights: " + std::to_string(t.values.size()) + " channels x " +
                    std::to_string(nodes.size()) + " nodes"};
}

Outcome run_condition_c(const Context& c) {
  const SampledFunction phi = config_generator(c.cfg);
  WeightOptions wo;
  wo.R = c.cfg.R;
  const ConditionCReport r =
      condition_c(phi, c.cfg.Kkl, c.cfg.eps_cc, unit_interval_nodes(c.cfg.N_G), wo);
  write_kv(c.path("condition_c.csv"),
           {{"ok", r.ok ? 1.0 : 0.0},
            {"max_violation", r.max_violation},
            {"k", static_cast<double>(r.k)},
            {"l", static_cast<double>(r.l)},
            {"lambda", r.lambda},
            {"eps", r.eps}});
  return {r.ok, "condition C max |G_kl| = " + sci(r.max_violation) + (r.ok ? " ok" : " violated")};
}

Outcome run_frame_bounds(const Context& c) {
  const SampledFunction phi = config_generator(c.cfg);
  const GramMatrix G = gram_matrix(phi, c.cfg.K);
  WeightOptions wo;
  wo.R = c.cfg.R;
  const std::vector<double> G00 = weight_G00(phi, unit_interval_nodes(c.cfg.N_G), wo);
  const FrameReport r = frame_bounds(G, c.cfg.eps_rank, G00, c.cfg.eps_supp);
  write_frame_report_csv(r, c.path("frame_report.csv"));
  return {r.frame_ok && r.bounds_agree,
          "frame bounds A=" + sci(r.A_est) + " B=" + sci(r.B_est) + " G00 range [" +
              sci(r.G00_min) + ", " + sci(r.G00_max) + "]"};
}

Outcome run_symbol_p(const Context& c) {
  const SampledFunction phi = config_generator(c.cfg);
  const std::vector<double> nodes = unit_interval_nodes(c.cfg.N_G);
  const SymbolP P = p_symbol(sample_at_lattice(phi, c.cfg.K), nodes);
  ReportTable ch{{"k", "l", "lambda", "re", "im"}, {}};
  for (const auto& [kl, v] : P.P)
    for (std::size_t a = 0; a < nodes.size(); ++a)
      ch.rows.push_back({static_cast<double>(kl.first), static_cast<double>(kl.second), nodes[a],
                         v[a].real(), v[a].imag()});
  emit_report(ch, ReportFormat::Csv, c.path("symbol_p.csv"));
  ReportTable nrm{{"lambda", "norm2", "abs_P00_sq"}, {}};
  for (std::size_t a = 0; a < nodes.size(); ++a)
    nrm.rows.push_back({nodes[a], P.norm2[a], std::norm(P.P0[a])});
  emit_report(nrm, ReportFormat::PlotData, c.path("symbol_norm.plot.csv"));
  const auto [lo, hi] = std::minmax_element(P.norm2.begin(), P.norm2.end());
  return {true, "symbol ||P||^2 in [" + sci(*lo) + ", " + sci(*hi) + "]"};
}

Outcome run_sample(const Context& c) {
  const SampledFunction phi = config_generator(c.cfg);
  const SampledFunction f = synthesize(phi, seeded_coeffs(c.cfg, c.cfg.c_kl, c.cfg.c_m));
  const LatticeSamples s = sample_at_lattice(f, c.cfg.K);
  ReportTable t{{"k", "l", "m", "re", "im"}, {}};
  const int K = c.cfg.K;
  for (int k = -K; k <= K; ++k)
    for (int l = -K; l <= K; ++l)
      for (int m = -K; m <= K; ++m)
        t.rows.push_back({static_cast<double>(k), static_cast<double>(l), static_cast<double>(m),
                          s.at(k, l, m).real(), s.at(k, l, m).imag()});
  emit_report(t, ReportFormat::Csv, c.path("samples.csv"));
  write_tensor(f, c.path("f.tensor"));
  return {true, "sampled " + std::to_string(t.rows.size()) + " lattice points"};
}

Outcome run_check_necessary(const Context& c) {
  const SampledFunction phi = config_generator(c.cfg);
  const std::vector<double> nodes = unit_interval_nodes(c.cfg.N_G);
  WeightOptions wo;
  wo.R = c.cfg.R;
  const std::vector<double> G00 = weight_G00(phi, nodes, wo);
  const double gmax = *std::max_element(G00.begin(), G00.end());
  const std::vector<bool> omega = omega_support(G00, c.cfg.eps_supp * gmax);
  const bool v0 = c.cfg.dual_setting == "v0";
  const LatticeSamples s = v0 ? central_samples(phi, c.cfg.K) : sample_at_lattice(phi, c.cfg.K);
  const SymbolP P = p_symbol(s, nodes);
  const PNormReport r = p_norm_check(P, omega, c.cfg.eps_cc, v0);
  ReportTable per{{"lambda", "norm2", "mask"}, {}};
  for (std::size_t a = 0; a < nodes.size(); ++a)
    per.rows.push_back({nodes[a], v0 ? std::norm(P.P0[a]) : P.norm2[a], omega[a] ? 1.0 : 0.0});
  emit_report(per, ReportFormat::PlotData, c.path("necessary_symbol.plot.csv"));
  write_kv(c.path("necessary.csv"), {{"A_P", r.A_P},
                                     {"B_P", r.B_P},
                                     {"off_mask_max", r.off_mask_max},
                                     {"eps", r.eps},
                                     {"central_only", v0 ? 1.0 : 0.0},
                                     {"ok", r.ok ? 1.0 : 0.0}});
  return {r.ok, "necessary condition A_P=" + sci(r.A_P) + (r.ok ? " holds" : " fails")};
}

void write_dual(const Context& c, const DualGenerator& d, const std::string& stem) {
  write_kv(c.path(stem + ".csv"),
           {{"mode_fiber_division", d.mode == DualMode::FiberDivision ? 1.0 : 0.0},
            {"setting_v0", d.setting == DualSetting::V0 ? 1.0 : 0.0},
            {"K", static_cast<double>(d.K)},
            {"sigma", static_cast<double>(d.sigma)},
            {"residual", d.residual},
            {"residual_other_sigma", d.residual_other_sigma},
            {"condition", d.condition},
            {"A_P", d.A_P},
            {"B_P", d.B_P},
            {"accepted", d.accepted ? 1.0 : 0.0}});
  ReportTable res{{"m", "residual"}, {}};
  const int M = static_cast<int>(d.test_residuals.size()) / 2;
  for (std::size_t i = 0; i < d.test_residuals.size(); ++i)
    res.rows.push_back({static_cast<double>(static_cast<int>(i) - M), d.test_residuals[i]});
  emit_report(res, ReportFormat::Csv, c.path(stem + "_residuals.csv"));
}

Outcome run_build_dual(const Context& c) {
  const SampledFunction phi = config_generator(c.cfg);
  const DualGenerator d = build_dual_generator(phi, c.cfg.K, config_dual_options(c.cfg));
  write_dual(c, d, "dual");
  write_tensor(d.psi, c.path("psi.tensor"));
  return {d.accepted, to_string(d.mode) + " dual (" + to_string(d.setting) +
                          ") residual=" + sci(d.residual)};
}

Outcome run_reconstruct(const Context& c) {
  const SampledFunction phi = config_generator(c.cfg);
  const CoeffArray coeffs = seeded_coeffs(c.cfg, c.cfg.c_kl, c.cfg.c_m);
  const SampledFunction f = synthesize(phi, coeffs);
  DualOptions o = config_dual_options(c.cfg);
  o.setting = DualSetting::General;
  const DualGenerator d = build_dual_generator(phi, c.cfg.K, o);
  write_dual(c, d, "dual");
  const CoeffArray alpha = alpha_coeffs(coeffs, phi, c.cfg.K);
  ReportTable at{{"k", "l", "m", "re", "im"}, {}};
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha.values[i] != cplx(0.0)) {
      const Lat p = alpha.point(i);
      at.rows.push_back({static_cast<double>(p.k), static_cast<double>(p.l),
                         static_cast<double>(p.m), alpha.values[i].real(),
                         alpha.values[i].imag()});
    }
  emit_report(at, ReportFormat::Csv, c.path("alpha.csv"));
  const double rel = rel_l2_error(reconstruct(coeffs, phi, d), f);
  write_kv(c.path("reconstruct.csv"),
           {{"rel_l2_error", rel}, {"dual_residual", d.residual}, {"tol", c.cfg.recon_tol}});
  return {rel <= c.cfg.recon_tol, "reconstruction relative L2 error = " + sci(rel)};
}

Outcome run_sample_v0(const Context& c) {
  const SampledFunction phi = config_generator(c.cfg);
  const int K = c.cfg.K;
  const CoeffArray coeffs = seeded_coeffs(c.cfg, 0, c.cfg.c_m);
  const SampledFunction f = synthesize(phi, coeffs);
  DualOptions o = config_dual_options(c.cfg);
  o.setting = DualSetting::V0;
  const DualGenerator d = build_dual_generator(phi, K, o);
  write_dual(c, d, "dual");
  const LatticeSamples s = central_samples(f, K);
  const SampledFunction rec = sample_reconstruct_v0(s, d);
  const GridSpec& g = f.grid;
  double e = 0.0, n = 0.0;
  for (int ix = 0; ix < g.Nx; ++ix)
    for (int iy = 0; iy < g.Ny; ++iy)
      for (int it = 0; it < g.Nt; ++it) {
        if (std::abs(g.t(it)) > c.cfg.c_m) continue;
        e = std::max(e, std::abs(rec.at(ix, iy, it) - f.at(ix, iy, it)));
        n = std::max(n, std::abs(f.at(ix, iy, it)));
      }
  const double rel = rel_l2_error(rec, f), sup = n > 0 ? e / n : 0.0;
  ReportTable samp{{"m", "re", "im"}, {}};
  for (int m = -K; m <= K; ++m)
    samp.rows.push_back({static_cast<double>(m), s.at(0, 0, m).real(), s.at(0, 0, m).imag()});
  emit_report(samp, ReportFormat::Csv, c.path("samples.csv"));
  write_kv(c.path("sample_v0.csv"), {{"rel_l2_error", rel},
                                     {"interior_sup_rel", sup},
                                     {"A_P", d.A_P},
                                     {"tol", c.cfg.recon_tol}});
  return {rel <= c.cfg.recon_tol && sup <= c.cfg.recon_tol && d.A_P > 0.0,
          "V0 sampling relative L2 error = " + sci(rel) + ", interior sup = " + sci(sup)};
}

Outcome run_flambda(const Context& c) {
  const SampledFunction f = config_generator(c.cfg);
  const double lam = c.cfg.lambda, a = c.cfg.xi1, b = c.cfg.xi2;
  const FiberFunction h = t_fiber(f, lam);
  const OperatorMatrix base = weyl_kernel(h, lam);
  KernelOptions ko;
  ko.xi = union_grid(base.xi, auto_xi_grid(modulate_fiber(h, a, b), lam));
  ko.xi->i0 -= 2L * c.cfg.delta_xi_inv;
  ko.xi->n += 4L * c.cfg.delta_xi_inv;
  const OperatorMatrix I = flambda_integral(h, lam, a, b, ko);
  const OperatorMatrix C = flambda_conjugation(weyl_kernel(h, lam, ko), a, b);
  const double form = rel_hs_error(C, I);
  const double hs = std::abs(std::sqrt(hs_norm2(I) / hs_norm2(base)) - 1.0);
  write_kv(c.path("flambda.csv"), {{"lambda", lam},
                                   {"xi1", a},
                                   {"xi2", b},
                                   {"conjugation_vs_integral", form},
                                   {"hs_invariance", hs},
                                   {"tol", c.cfg.flambda_tol}});
  return {form <= c.cfg.flambda_tol && hs <= c.cfg.flambda_tol,
          "F_lambda forms differ by " + sci(form) + ", HS invariance " + sci(hs)};
}

Outcome run_invert(const Context& c) {
  const SampledFunction f = config_generator(c.cfg);
  const GridSpec& g = f.grid;
  const FlambdaField F = flambda_field(f, config_lambda_grid(c.cfg), c.cfg.xi1, c.cfg.xi2);
  const double fmax = f.max_abs();
  ReportTable t = point_table();
  double worst = 0.0;
  for (const auto& [ix, iy, it] : seeded_points(g, c.cfg.seed, c.cfg.points, 1.5, 1.5, 1.5)) {
    const GroupElement p(g.x(ix), g.y(iy), g.t(it));
    const cplx v = invert_pointwise(F, p), ref = f.at(ix, iy, it);
    worst = std::max(worst, fmax > 0 ? std::abs(v - ref) / fmax : 0.0);
    add_point(t, g, {ix, iy, it}, v, ref);
  }
  emit_report(t, ReportFormat::Csv, c.path("invert.csv"));
  write_kv(c.path("invert_summary.csv"), {{"max_rel_error", worst}, {"tol", c.cfg.recon_tol}});
  return {worst <= c.cfg.recon_tol, "pointwise inversion error = " + sci(worst)};
}

Outcome run_reconstruct_cor(const Context& c) {
  const SampledFunction phi = config_generator(c.cfg);
  const GridSpec& g = phi.grid;
  const CoeffArray coeffs = seeded_coeffs(c.cfg, c.cfg.c_kl, c.cfg.c_m);
  const SampledFunction f = synthesize(phi, coeffs);
  const int R = std::min(c.cfg.c_kl, c.cfg.K);
  const auto idx = seeded_points(g, c.cfg.seed + 1, c.cfg.points, 2.0 * R + 1.0, R + 0.5,
                                 std::min(c.cfg.c_m, c.cfg.K) + 0.5);
  std::vector<GroupElement> pts;
  for (const auto& [ix, iy, it] : idx) pts.emplace_back(g.x(ix), g.y(iy), g.t(it));
  const std::vector<cplx> vals = reconstruct_corollary(coeffs, phi, config_lambda_grid(c.cfg), pts);
  const double fmax = f.max_abs();
  ReportTable t = point_table();
  double worst = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto& [ix, iy, it] = idx[i];
    const cplx ref = f.at(ix, iy, it);
    worst = std::max(worst, fmax > 0 ? std::abs(vals[i] - ref) / fmax : 0.0);
    add_point(t, g, idx[i], vals[i], ref);
  }
  emit_report(t, ReportFormat::Csv, c.path("reconstruct_cor.csv"));
  write_kv(c.path("reconstruct_cor_summary.csv"),
           {{"max_rel_error", worst}, {"tol", c.cfg.recon_tol}});
  return {worst <= c.cfg.recon_tol, "coefficient inversion error = " + sci(worst)};
}

Outcome run_selftest(const Context& c, std::ostream& out) {
  AcceptanceOptions o;
  o.quick = c.cfg.quick;
  o.seed = c.cfg.seed;
  o.on_result = [&](const CriterionResult& r) { out << acceptance_line(r) << "\n" << std::flush; };
  const std::vector<CriterionResult> rs = run_acceptance(o);
  write_text(c.path("selftest.csv"), acceptance_csv(rs));
  const auto passed = std::count_if(rs.begin(), rs.end(), [](const auto& r) { return r.pass; });
  return {passed == static_cast<long>(rs.size()),
          std::to_string(passed) + "/" + std::to_string(rs.size()) + " criteria passed"};
}

using Runner = std::function<Outcome(const Context&, std::ostream&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> r = [] {
    std::map<std::string, Runner> m;
    auto plain = [](Outcome (*fn)(const Context&)) {
      return [fn](const Context& c, std::ostream&) { return fn(c); };
    };
    m["plancherel"] = plain(run_plancherel);
    m["weights"] = plain(run_weights);
    m["condition-c"] = plain(run_condition_c);
    m["frame-bounds"] = plain(run_frame_bounds);
    m["symbol-p"] = plain(run_symbol_p);
    m["check-necessary"] = plain(run_check_necessary);
    m["build-dual"] = plain(run_build_dual);
    m["reconstruct"] = plain(run_reconstruct);
    m["sample"] = plain(run_sample);
    m["sample-v0"] = plain(run_sample_v0);
    m["flambda"] = plain(run_flambda);
    m["invert"] = plain(run_invert);
    m["reconstruct-cor"] = plain(run_reconstruct_cor);
    m["selftest"] = run_selftest;
    return m;
  }();
  return r;
}

std::string thread_note() {
  const char* env = std::getenv("HEIS_SAMPLER_THREADS");
  return std::string("1 (HEIS_SAMPLER_THREADS=") + (env ? env : "unset") + ")";
}

}  // namespace

void emit_report(const ReportTable& t, ReportFormat format, const std::string& path) {
  for (const auto& row : t.rows)
    if (row.size() != t.columns.size())
      throw DimensionMismatch("report row width differs from the header");
  std::vector<const std::vector<double>*> order;
  for (const auto& row : t.rows) order.push_back(&row);
  if (format == ReportFormat::PlotData)
    std::stable_sort(order.begin(), order.end(),
                     [](const auto* a, const auto* b) { return (*a)[0] < (*b)[0]; });
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += "\n";
  for (const auto* row : order) {
    for (std::size_t i = 0; i < row->size(); ++i) s += (i ? "," : "") + fmt((*row)[i]);
    s += "\n";
  }
  write_text(path, s);
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, r] : runners()) v.push_back(k);
    return v;
  }();
  return names;
}

int run_experiment(const std::string& subcommand, const ExperimentConfig& cfg,
                   const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  int code = kExitError;
  try {
    const auto it = runners().find(subcommand);
    if (it == runners().end()) throw ConfigError("unknown subcommand '" + subcommand + "'");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
    const Outcome o = it->second(Context{cfg, out_dir}, out);
    out << subcommand << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.summary << "\n";
    code = o.pass ? kExitPass : kExitTolerance;
  } catch (const std::exception& e) {
    err << "error: " << subcommand << ": " << e.what() << "\n";
    code = kExitError;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  // the manifest is best effort once the directory exists
  std::ofstream m(out_dir + "/manifest.txt", std::ios::binary);
  if (m) {
    m << "# heis-sampler run manifest\n"
      << "version = " << kVersion << "\n"
      << "subcommand = " << subcommand << "\n"
      << "threads = " << thread_note() << "\n"
      << "eigen = " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "."
      << EIGEN_MINOR_VERSION << "\n"
      << "elapsed_seconds = " << fmt(secs) << "\n"
      << "exit_code = " << code << "\n"
      << "# config\n"
      << echo_config(cfg);
  }
  return code;
}

}  // namespace heis
