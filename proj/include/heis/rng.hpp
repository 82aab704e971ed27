// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// Seeded coefficients from MT19937-64 (the std::mt19937_64 engine, whose
// output sequence is fixed by the C++ standard). Doubles are formed as
// (x >> 11) * 2^-53; no std distributions are used because their output
// is implementation-defined.

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace heis {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double symmetric() { return 2.0 * uniform() - 1.0; }  // [-1, 1)
  std::complex<double> cuniform() { return {symmetric(), symmetric()}; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace heis
