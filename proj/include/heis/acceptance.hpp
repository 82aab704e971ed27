// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// Property-based acceptance suite: one pass/fail result per criterion.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace heis {

struct CriterionResult {
  int id = 0;
  std::string name;
  double value = 0.0;  // measured error (or mismatch count for determinism)
  double tol = 0.0;    // pass iff value <= tol and every side check holds
  bool pass = false;
  std::string detail;  // side measurements, deterministic text
};

struct AcceptanceOptions {
  bool quick = false;  // fast subset only
  std::uint64_t seed = 1;
  std::function<void(const CriterionResult&)> on_result;  // progress callback
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

// "criterion  7 PASS value=... tol=... name [detail]"
std::string acceptance_line(const CriterionResult& r);
// id,name,value,tol,pass,detail rows with a header (values %.17g).
std::string acceptance_csv(const std::vector<CriterionResult>& rs);

}  // namespace heis
