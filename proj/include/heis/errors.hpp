// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <stdexcept>
#include <string>

namespace heis {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Translated mass leaving the grid exceeded the configured bound.
class TranslateOutOfBand : public Error { using Error::Error; };
class GridMismatch : public Error { using Error::Error; };
class LatticeOutsideGrid : public Error { using Error::Error; };
// A shift that must be a whole number of grid steps is not.
class OffGridShift : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class SingularGram : public Error { using Error::Error; };
class IllConditioned : public Error { using Error::Error; };
class NoSupport : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

}  // namespace heis
