// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// heis-sampler <subcommand> [--config FILE] [--out DIR] [--set key=value]... [--quick]
// Exit codes: 0 pass, 2 tolerance failure, 1 error.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heis/errors.hpp"
#include "heis/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sampling and reconstruction on the Heisenberg group"};
  app.set_version_flag("--version", std::string(heis::kVersion));
  app.require_subcommand(1, 1);

  std::string config_path, out_dir = "out";
  std::vector<std::string> overrides;
  bool quick = false, list_keys = false;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--set", overrides, "override one config key, key=value (repeatable)");
  app.add_flag("--quick", quick, "selftest: fast criterion subset only");
  app.add_flag("--list-keys", list_keys, "print the recognised config keys and exit");
  app.fallthrough();

  for (const std::string& name : heis::subcommands())
    app.add_subcommand(name, "run the " + name + " experiment");

  try {
    // --list-keys works without a subcommand
    for (int i = 1; i < argc; ++i)
      if (std::string(argv[i]) == "--list-keys") {
        for (const auto& k : heis::config_keys()) std::cout << k.name << "  " << k.doc << "\n";
        return heis::kExitPass;
      }
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? heis::kExitPass : heis::kExitError;
  }

  heis::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = heis::load_config(config_path);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw heis::ConfigError("--set expects key=value, got '" + kv + "'");
      heis::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (quick) cfg.quick = true;
    heis::validate_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return heis::kExitError;
  }
  return heis::run_experiment(app.get_subcommands().front()->get_name(), cfg, out_dir,
                              std::cout, std::cerr);
}
