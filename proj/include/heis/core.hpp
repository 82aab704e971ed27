// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// Heisenberg group arithmetic, regular (x,y,t) grids, sampled functions and
// lattice-indexed arrays.
//
// Group law: (x,y,t)(u,v,s) = (x+u, y+v, t+s+(u.y - v.x)/2).
// Standard lattice points (2k,l,m) multiply exactly in integers:
//   (k,l,m)(k',l',m') = (k+k', l+l', m+m' + k'.l - k.l').

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "heis/errors.hpp"

namespace heis {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct GroupElement {
  std::vector<double> x, y;
  double t = 0.0;

  GroupElement() = default;
  GroupElement(std::vector<double> x_, std::vector<double> y_, double t_);
  // n = 1 shorthand.
  GroupElement(double x_, double y_, double t_);

  int n() const { return static_cast<int>(x.size()); }
  static GroupElement identity(int n);
};

struct LatticePoint {
  std::vector<long> k, l;
  long m = 0;

  LatticePoint() = default;
  LatticePoint(std::vector<long> k_, std::vector<long> l_, long m_);
  LatticePoint(long k_, long l_, long m_);

  int n() const { return static_cast<int>(k.size()); }
  // Exact embedding (2k, l, m).
  GroupElement embed() const;
  bool operator==(const LatticePoint&) const = default;
};

GroupElement group_mul(const GroupElement& a, const GroupElement& b);
GroupElement group_inv(const GroupElement& a);
LatticePoint lattice_mul(const LatticePoint& a, const LatticePoint& b);
LatticePoint lattice_inv(const LatticePoint& a);

// n = 1 lattice triple used on hot paths.
struct Lat {
  int k = 0, l = 0, m = 0;
  bool operator==(const Lat&) const = default;
};
inline Lat mul(Lat a, Lat b) {
  return {a.k + b.k, a.l + b.l, a.m + b.m + (b.k * a.l - a.k * b.l)};
}
inline Lat inv(Lat a) { return {-a.k, -a.l, -a.m}; }
Lat to_lat(const LatticePoint& p);

// Regular grid for n = 1. Every axis is centred: coordinate = (i - N/2)*h.
// y and xi share the spacing 1/q; x has spacing 1/qx (default qx = q).
// The t spacing 2T/Nt must be 1/pt for an integer pt so that integers lie
// on every axis.
struct GridSpec {
  int n = 1;
  int q = 4;
  int qx = 4;
  int Nx = 128;
  int Ny = 128;
  double T = 8.0;
  int Nt = 128;

  static GridSpec uniform(int q, int N, double T, int Nt);

  double dx() const { return 1.0 / qx; }
  double dy() const { return 1.0 / q; }
  double dt() const { return 2.0 * T / Nt; }
  int pt() const;  // t points per unit
  double cell() const { return dx() * dy() * dt(); }

  double x(int i) const { return (i - Nx / 2) * dx(); }
  double y(int j) const { return (j - Ny / 2) * dy(); }
  double t(int s) const { return (s - Nt / 2) * dt(); }

  std::size_t size() const {
    return static_cast<std::size_t>(Nx) * Ny * Nt;
  }
  std::size_t index(int ix, int iy, int it) const {
    return (static_cast<std::size_t>(ix) * Ny + iy) * Nt + it;
  }
  bool in_grid(int ix, int iy, int it) const {
    return ix >= 0 && ix < Nx && iy >= 0 && iy < Ny && it >= 0 && it < Nt;
  }
  double x_extent() const { return Nx / 2 * dx(); }
  double y_extent() const { return Ny / 2 * dy(); }

  void validate() const;
  bool operator==(const GridSpec& o) const;
};

struct SampledFunction {
  GridSpec grid;
  std::vector<cplx> values;  // layout (ix, iy, it), t fastest

  SampledFunction() = default;
  explicit SampledFunction(const GridSpec& g);

  cplx& at(int ix, int iy, int it) { return values[grid.index(ix, iy, it)]; }
  cplx at(int ix, int iy, int it) const {
    return values[grid.index(ix, iy, it)];
  }
  cplx get(int ix, int iy, int it) const {
    return grid.in_grid(ix, iy, it) ? at(ix, iy, it) : cplx(0.0);
  }
  double norm2() const;  // squared L2 norm with cell weights
  double max_abs() const;
};

cplx inner(const SampledFunction& f, const SampledFunction& g);
SampledFunction axpy(cplx a, const SampledFunction& x,
                     const SampledFunction& y);  // a*x + y
SampledFunction scaled(cplx a, const SampledFunction& f);
double rel_l2_error(const SampledFunction& approx, const SampledFunction& ref);

// Values on the full box |k|,|l|,|m| <= K.
struct LatticeArray {
  int K = 0;
  std::vector<cplx> values;

  LatticeArray() = default;
  explicit LatticeArray(int K_);

  int side() const { return 2 * K + 1; }
  std::size_t size() const { return values.size(); }
  bool contains(int k, int l, int m) const {
    return std::abs(k) <= K && std::abs(l) <= K && std::abs(m) <= K;
  }
  std::size_t index(int k, int l, int m) const {
    return (static_cast<std::size_t>(k + K) * side() + (l + K)) * side() +
           (m + K);
  }
  Lat point(std::size_t idx) const;
  cplx& at(int k, int l, int m) { return values[index(k, l, m)]; }
  cplx at(int k, int l, int m) const { return values[index(k, l, m)]; }
  // Zero outside the box.
  cplx get(int k, int l, int m) const {
    return contains(k, l, m) ? at(k, l, m) : cplx(0.0);
  }
  cplx get(Lat p) const { return get(p.k, p.l, p.m); }
};
using LatticeSamples = LatticeArray;
using CoeffArray = LatticeArray;

// Closed-form function of (x, y, t) used as a generator.
struct Generator {
  std::string name;
  std::function<cplx(double, double, double)> eval;
};

Generator gaussian(double wx = 1.0, double wy = 1.0, double wt = 1.0);
// C-infinity bump in (x,y) supported in |x| < 1, |y| < 1/2 (one lattice
// cell) times exp(-pi (t/wt)^2). Translates with distinct (k,l) have
// disjoint supports.
Generator cell_bump(double wt = 1.0);

SampledFunction sample(const Generator& g, const GridSpec& grid);

// Lattice-index map of a left translation: L_p f(X) = f(p^-1 X), so the
// sample at Y moves to p.Y. Exact when the induced t-shift is a whole
// number of t steps.
class LatticeShift {
 public:
  LatticeShift(const GridSpec& g, Lat p);
  // Target t-index offset of a source column, or false if off-grid.
  bool t_offset(int ix, int iy, int* off) const;
  int dix() const { return dix_; }
  int diy() const { return diy_; }
  bool exact_everywhere() const { return exact_; }

 private:
  GridSpec g_;
  Lat p_;
  int dix_, diy_;
  long a_, b_, c0_, den_;
  bool exact_;
};

struct TranslateOptions {
  double max_mass_loss = 1e-10;  // relative squared-norm loss bound
};

SampledFunction left_translate(const SampledFunction& f, const LatticePoint& p,
                               const TranslateOptions& opt = {});

// Nonzero samples above rel_threshold * max |f|.
struct SparseFunction {
  GridSpec grid;
  struct Entry {
    int ix, iy, it;
    cplx v;
  };
  std::vector<Entry> entries;
  double norm2 = 0.0;
};
SparseFunction sparsify(const SampledFunction& f, double rel_threshold = 1e-18);

// out += c * L_p f by exact index moves (OffGridShift otherwise). Returns
// the squared-norm mass dropped at the grid edge.
double accumulate_translate(SampledFunction& out, const SparseFunction& f,
                            Lat p, cplx c);

// sum_p c_p L_p f over the box of c. Throws TranslateOutOfBand when the
// dropped mass fraction exceeds opt.max_mass_loss.
SampledFunction synthesize(const SampledFunction& f, const CoeffArray& c,
                           const TranslateOptions& opt = {});

// <f, L_q f> using grid index arithmetic over the support of f
// (OffGridShift when the t-shift of q is not grid-aligned).
cplx translate_inner(const SparseFunction& f, const SampledFunction& dense,
                     Lat q);

SampledFunction group_convolve(const SampledFunction& f,
                               const SampledFunction& g);

// X -> conj f(X^-1) by index reversal.
SampledFunction tilde(const SampledFunction& f);

LatticeSamples sample_at_lattice(const SampledFunction& f, int K);
LatticeSamples sample_at_lattice(const Generator& g, int K);
// Largest K whose box of lattice points lies on the grid.
int max_lattice_radius(const GridSpec& g);

// Binary tensor and CSV slice.
void write_tensor(const SampledFunction& f, const std::string& path);
SampledFunction read_tensor(const std::string& path);
void write_csv_slice(const SampledFunction& f, int it, const std::string& path);

}  // namespace heis
