// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.
//
// Tensor file layout, all fields little-endian IEEE-754 binary64:
//   magic "HEISSF01" (8 bytes)
//   header: n, Nx, Ny, Nt, dx, dy, dt, T   (8 doubles)
//   payload: Nx*Ny*Nt complex values as (re, im), t fastest, then y, then x.

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "heis/core.hpp"

namespace heis {

static_assert(std::endian::native == std::endian::little,
              "tensor I/O assumes a little-endian host");

namespace {
constexpr char kMagic[8] = {'H', 'E', 'I', 'S', 'S', 'F', '0', '1'};

void put(std::ofstream& o, double v) {
  o.write(reinterpret_cast<const char*>(&v), sizeof v);
}
double take(std::ifstream& in) {
  double v;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
}  // namespace

void write_tensor(const SampledFunction& f, const std::string& path) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw IoError("cannot open " + path + " for writing");
  const GridSpec& g = f.grid;
  o.write(kMagic, sizeof kMagic);
  for (double v : {double(g.n), double(g.Nx), double(g.Ny), double(g.Nt),
                   g.dx(), g.dy(), g.dt(), g.T})
    put(o, v);
  o.write(reinterpret_cast<const char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
  if (!o) throw IoError("write failed: " + path);
}

SampledFunction read_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw IoError(path + ": not a heis tensor file");
  double h[8];
  for (double& v : h) v = take(in);
  if (!in) throw IoError(path + ": truncated header");
  GridSpec g;
  g.n = static_cast<int>(h[0]);
  g.Nx = static_cast<int>(h[1]);
  g.Ny = static_cast<int>(h[2]);
  g.Nt = static_cast<int>(h[3]);
  g.qx = static_cast<int>(std::lround(1.0 / h[4]));
  g.q = static_cast<int>(std::lround(1.0 / h[5]));
  g.T = h[7];
  if (std::abs(g.dt() - h[6]) > 1e-12) throw IoError(path + ": bad t spacing");
  SampledFunction f(g);
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
  if (!in) throw IoError(path + ": truncated payload");
  return f;
}

void write_csv_slice(const SampledFunction& f, int it, const std::string& path) {
  const GridSpec& g = f.grid;
  if (it < 0 || it >= g.Nt) throw IoError("t index out of range");
  std::ofstream o(path);
  if (!o) throw IoError("cannot open " + path + " for writing");
  o << "x,y,t,re,im\n" << std::setprecision(17);
  for (int ix = 0; ix < g.Nx; ++ix)
    for (int iy = 0; iy < g.Ny; ++iy) {
      const cplx v = f.at(ix, iy, it);
      o << g.x(ix) << ',' << g.y(iy) << ',' << g.t(it) << ',' << v.real()
        << ',' << v.imag() << '\n';
    }
}

}  // namespace heis
