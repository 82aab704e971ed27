// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// Subcommand orchestration: each run writes CSV reports and manifest.txt
// (config echo, version, thread cap, timings) into the output directory.
// Exit codes: 0 pass, 2 tolerance failure, 1 error.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "heis/config.hpp"

namespace heis {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode { kExitPass = 0, kExitError = 1, kExitTolerance = 2 };

// Numeric table; values are written with %.17g.
struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

enum class ReportFormat { Csv, PlotData };

// Csv keeps row order; PlotData sorts rows by the first column (lambda).
// An empty table yields a header-only file.
void emit_report(const ReportTable& t, ReportFormat format, const std::string& path);

const std::vector<std::string>& subcommands();

// Runs one subcommand; errors are reported on err and mapped to exit 1.
int run_experiment(const std::string& subcommand, const ExperimentConfig& cfg,
                   const std::string& out_dir, std::ostream& out, std::ostream& err);

}  // namespace heis
