// Copyright 2026 The heis-sampler Authors.
// Licensed under the Apache License, Version 2.0.

#include "heis/core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <cmath>
#include <numeric>

namespace heis {

GroupElement::GroupElement(std::vector<double> x_, std::vector<double> y_,
                           double t_)
    : x(std::move(x_)), y(std::move(y_)), t(t_) {
  if (x.size() != y.size()) throw DimensionMismatch("x and y lengths differ");
}

GroupElement::GroupElement(double x_, double y_, double t_)
    : x{x_}, y{y_}, t(t_) {}

GroupElement GroupElement::identity(int n) {
  return GroupElement(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                      0.0);
}

LatticePoint::LatticePoint(std::vector<long> k_, std::vector<long> l_, long m_)
    : k(std::move(k_)), l(std::move(l_)), m(m_) {
  if (k.size() != l.size()) throw DimensionMismatch("k and l lengths differ");
}

LatticePoint::LatticePoint(long k_, long l_, long m_) : k{k_}, l{l_}, m(m_) {}

GroupElement LatticePoint::embed() const {
  GroupElement g;
  g.x.resize(k.size());
  g.y.resize(l.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    g.x[i] = 2.0 * static_cast<double>(k[i]);
    g.y[i] = static_cast<double>(l[i]);
  }
  g.t = static_cast<double>(m);
  return g;
}

GroupElement group_mul(const GroupElement& a, const GroupElement& b) {
  if (a.n() != b.n()) throw DimensionMismatch("group_mul: dimension");
  GroupElement c;
  c.x.resize(a.x.size());
  c.y.resize(a.y.size());
  double sym = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    c.x[i] = a.x[i] + b.x[i];
    c.y[i] = a.y[i] + b.y[i];
    sym += b.x[i] * a.y[i] - b.y[i] * a.x[i];
  }
  c.t = a.t + b.t + 0.5 * sym;
  return c;
}

GroupElement group_inv(const GroupElement& a) {
  GroupElement c = a;
  for (auto& v : c.x) v = -v;
  for (auto& v : c.y) v = -v;
  c.t = -a.t;
  return c;
}

LatticePoint lattice_mul(const LatticePoint& a, const LatticePoint& b) {
  if (a.n() != b.n()) throw DimensionMismatch("lattice_mul: dimension");
  LatticePoint c;
  c.k.resize(a.k.size());
  c.l.resize(a.l.size());
  long sym = 0;
  for (int i = 0; i < a.n(); ++i) {
    c.k[i] = a.k[i] + b.k[i];
    c.l[i] = a.l[i] + b.l[i];
    sym += b.k[i] * a.l[i] - a.k[i] * b.l[i];
  }
  c.m = a.m + b.m + sym;
  return c;
}

LatticePoint lattice_inv(const LatticePoint& a) {
  LatticePoint c = a;
  for (auto& v : c.k) v = -v;
  for (auto& v : c.l) v = -v;
  c.m = -a.m;
  return c;
}

Lat to_lat(const LatticePoint& p) {
  if (p.n() != 1) throw DimensionMismatch("grid operations require n = 1");
  return {static_cast<int>(p.k[0]), static_cast<int>(p.l[0]),
          static_cast<int>(p.m)};
}

// ---------------------------------------------------------------- grid

GridSpec GridSpec::uniform(int q, int N, double T, int Nt) {
  GridSpec g;
  g.q = q;
  g.qx = q;
  g.Nx = N;
  g.Ny = N;
  g.T = T;
  g.Nt = Nt;
  return g;
}

int GridSpec::pt() const {
  return static_cast<int>(std::lround(Nt / (2.0 * T)));
}

void GridSpec::validate() const {
  if (n != 1) throw GridMismatch("grids are implemented for n = 1 only");
  if (q < 2 || qx < 2) throw GridMismatch("spacing denominators must be >= 2");
  if (Nx <= 0 || Ny <= 0 || Nt <= 0 || Nx % 2 || Ny % 2 || Nt % 2)
    throw GridMismatch("grid point counts must be positive and even");
  if (!(T > 0.0)) throw GridMismatch("T must be positive");
  const double p = Nt / (2.0 * T);
  if (std::abs(p - std::round(p)) > 1e-12 || std::round(p) < 1)
    throw GridMismatch("2T/Nt must be 1/integer");
}

bool GridSpec::operator==(const GridSpec& o) const {
  return n == o.n && q == o.q && qx == o.qx && Nx == o.Nx && Ny == o.Ny &&
         T == o.T && Nt == o.Nt;
}

SampledFunction::SampledFunction(const GridSpec& g)
    : grid(g), values(g.size(), cplx(0.0)) {
  g.validate();
}

double SampledFunction::norm2() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * grid.cell();
}

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

static void require_same(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw GridMismatch("functions live on different grids");
}

cplx inner(const SampledFunction& f, const SampledFunction& g) {
  require_same(f.grid, g.grid);
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    s += f.values[i] * std::conj(g.values[i]);
  return s * f.grid.cell();
}

SampledFunction axpy(cplx a, const SampledFunction& x,
                     const SampledFunction& y) {
  require_same(x.grid, y.grid);
  SampledFunction r = y;
  for (std::size_t i = 0; i < r.values.size(); ++i)
    r.values[i] += a * x.values[i];
  return r;
}

SampledFunction scaled(cplx a, const SampledFunction& f) {
  SampledFunction r = f;
  for (auto& v : r.values) v *= a;
  return r;
}

double rel_l2_error(const SampledFunction& approx, const SampledFunction& ref) {
  require_same(approx.grid, ref.grid);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.values.size(); ++i) {
    num += std::norm(approx.values[i] - ref.values[i]);
    den += std::norm(ref.values[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

// ---------------------------------------------------------------- lattice arrays

LatticeArray::LatticeArray(int K_) : K(K_) {
  if (K < 0) throw DimensionMismatch("lattice radius must be >= 0");
  const std::size_t s = side();
  values.assign(s * s * s, cplx(0.0));
}

Lat LatticeArray::point(std::size_t idx) const {
  const int s = side();
  const int m = static_cast<int>(idx % s) - K;
  idx /= s;
  const int l = static_cast<int>(idx % s) - K;
  const int k = static_cast<int>(idx / s) - K;
  return {k, l, m};
}

// ---------------------------------------------------------------- generators

Generator gaussian(double wx, double wy, double wt) {
  Generator g;
  g.name = "gaussian";
  g.eval = [wx, wy, wt](double x, double y, double t) {
    const double a = x / wx, b = y / wy, c = t / wt;
    return cplx(std::exp(-kPi * (a * a + b * b + c * c)), 0.0);
  };
  return g;
}

static double bump1(double u) {
  const double r = 1.0 - u * u;
  return r > 0.0 ? std::exp(1.0 - 1.0 / r) : 0.0;
}

Generator cell_bump(double wt) {
  Generator g;
  g.name = "cell_bump";
  g.eval = [wt](double x, double y, double t) {
    const double c = t / wt;
    return cplx(bump1(x) * bump1(2.0 * y) * std::exp(-kPi * c * c), 0.0);
  };
  return g;
}

SampledFunction sample(const Generator& gen, const GridSpec& grid) {
  SampledFunction f(grid);
  for (int ix = 0; ix < grid.Nx; ++ix)
    for (int iy = 0; iy < grid.Ny; ++iy)
      for (int it = 0; it < grid.Nt; ++it)
        f.at(ix, iy, it) = gen.eval(grid.x(ix), grid.y(iy), grid.t(it));
  return f;
}

// ---------------------------------------------------------------- translation

LatticeShift::LatticeShift(const GridSpec& g, Lat p) : g_(g), p_(p) {
  dix_ = 2 * p.k * g.qx;
  diy_ = p.l * g.q;
  const long pt = g.pt();
  // t-offset in steps: m*pt + pt*(l*x - 2k*y)/2.
  a_ = pt * p.l * g.q;
  b_ = -2L * p.k * pt * g.qx;
  den_ = 2L * g.qx * g.q;
  c0_ = static_cast<long>(p.m) * pt;
  exact_ = (a_ % den_ == 0) && (b_ % den_ == 0);
}

bool LatticeShift::t_offset(int ix, int iy, int* off) const {
  const long num = a_ * (ix - g_.Nx / 2) + b_ * (iy - g_.Ny / 2);
  if (num % den_ != 0) return false;
  *off = static_cast<int>(c0_ + num / den_);
  return true;
}

namespace {

// Shift a column by a fractional number of steps through a zero-padded DFT:
// out[s] = src(s - delta).
class FractionalShifter {
 public:
  explicit FractionalShifter(int n) : n_(n), L_(2 * n) {
    buf_ = fftw_alloc_complex(L_);
    fwd_ = fftw_plan_dft_1d(L_, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(L_, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FractionalShifter() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  FractionalShifter(const FractionalShifter&) = delete;
  FractionalShifter& operator=(const FractionalShifter&) = delete;

  void shift(const cplx* src, double delta, cplx* out) {
    if (std::abs(delta) >= n_) {
      std::fill(out, out + n_, cplx(0.0));
      return;
    }
    auto* b = reinterpret_cast<cplx*>(buf_);
    std::copy(src, src + n_, b);
    std::fill(b + n_, b + L_, cplx(0.0));
    fftw_execute(fwd_);
    for (int j = 0; j < L_; ++j) {
      const int sj = j < L_ / 2 ? j : j - L_;
      if (j == L_ / 2) {
        b[j] = 0.0;
        continue;
      }
      b[j] *= std::polar(1.0 / L_, -2.0 * kPi * sj * delta / L_);
    }
    fftw_execute(bwd_);
    std::copy(b, b + n_, out);
  }

 private:
  int n_, L_;
  fftw_complex* buf_;
  fftw_plan fwd_, bwd_;
};

}  // namespace

SampledFunction left_translate(const SampledFunction& f, const LatticePoint& lp,
                               const TranslateOptions& opt) {
  const Lat p = to_lat(lp);
  const GridSpec& g = f.grid;
  SampledFunction out(g);
  // Output column (x,y) reads the source column (x-2k, y-l) at t - c with
  // c = m - k y + l x / 2.
  const LatticeShift back(g, inv(p));
  std::unique_ptr<FractionalShifter> shifter;
  std::vector<cplx> tmp(g.Nt);
  for (int ix = 0; ix < g.Nx; ++ix) {
    const int sx = ix - 2 * p.k * g.qx;
    if (sx < 0 || sx >= g.Nx) continue;
    for (int iy = 0; iy < g.Ny; ++iy) {
      const int sy = iy - p.l * g.q;
      if (sy < 0 || sy >= g.Ny) continue;
      const cplx* src = &f.values[g.index(sx, sy, 0)];
      cplx* dst = &out.values[g.index(ix, iy, 0)];
      int off;
      if (back.t_offset(ix, iy, &off)) {
        // source index = target index + off
        for (int it = 0; it < g.Nt; ++it) {
          const int s = it + off;
          if (s >= 0 && s < g.Nt) dst[it] = src[s];
        }
      } else {
        if (!shifter) shifter = std::make_unique<FractionalShifter>(g.Nt);
        const double c = p.m - p.k * g.y(iy) + 0.5 * p.l * g.x(ix);
        shifter->shift(src, c * g.pt(), dst);
      }
    }
  }
  const double n0 = f.norm2();
  if (n0 > 0.0) {
    const double loss = 1.0 - out.norm2() / n0;
    if (loss > opt.max_mass_loss)
      throw TranslateOutOfBand("translate by (" + std::to_string(p.k) + "," +
                               std::to_string(p.l) + "," +
                               std::to_string(p.m) + ") loses mass fraction " +
                               std::to_string(loss));
  }
  return out;
}

SparseFunction sparsify(const SampledFunction& f, double rel_threshold) {
  SparseFunction s;
  s.grid = f.grid;
  const double thr = rel_threshold * f.max_abs();
  const GridSpec& g = f.grid;
  for (int ix = 0; ix < g.Nx; ++ix)
    for (int iy = 0; iy < g.Ny; ++iy)
      for (int it = 0; it < g.Nt; ++it) {
        const cplx v = f.at(ix, iy, it);
        if (std::abs(v) > thr && v != cplx(0.0)) {
          s.entries.push_back({ix, iy, it, v});
          s.norm2 += std::norm(v);
        }
      }
  s.norm2 *= g.cell();
  return s;
}

double accumulate_translate(SampledFunction& out, const SparseFunction& f,
                            Lat p, cplx c) {
  require_same(out.grid, f.grid);
  const GridSpec& g = f.grid;
  const LatticeShift sh(g, p);
  if (!sh.exact_everywhere())
    throw OffGridShift("accumulate_translate: t-shift not grid-aligned");
  double lost = 0.0;
  int off = 0;
  int last_ix = -1, last_iy = -1;
  for (const auto& e : f.entries) {
    if (e.ix != last_ix || e.iy != last_iy) {
      last_ix = e.ix;
      last_iy = e.iy;
      sh.t_offset(e.ix, e.iy, &off);
    }
    const int tx = e.ix + sh.dix(), ty = e.iy + sh.diy(), tt = e.it + off;
    if (g.in_grid(tx, ty, tt))
      out.at(tx, ty, tt) += c * e.v;
    else
      lost += std::norm(c * e.v);
  }
  return lost * g.cell();
}

SampledFunction synthesize(const SampledFunction& f, const CoeffArray& c,
                           const TranslateOptions& opt) {
  SampledFunction out(f.grid);
  const SparseFunction s = sparsify(f);
  double lost = 0.0, total = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.values[i] == cplx(0.0)) continue;
    const Lat p = c.point(i);
    const LatticeShift sh(f.grid, p);
    if (sh.exact_everywhere()) {
      lost += accumulate_translate(out, s, p, c.values[i]);
    } else {
      TranslateOptions loose = opt;
      loose.max_mass_loss = 1.0;
      const SampledFunction tr =
          left_translate(f, LatticePoint(p.k, p.l, p.m), loose);
      lost += std::norm(c.values[i]) * (s.norm2 - tr.norm2());
      for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] += c.values[i] * tr.values[j];
    }
    total += std::norm(c.values[i]) * s.norm2;
  }
  if (total > 0.0 && lost / total > opt.max_mass_loss)
    throw TranslateOutOfBand("synthesis loses mass fraction " +
                             std::to_string(lost / total));
  return out;
}

cplx translate_inner(const SparseFunction& f, const SampledFunction& dense,
                     Lat q) {
  require_same(f.grid, dense.grid);
  const GridSpec& g = f.grid;
  const LatticeShift sh(g, inv(q));
  cplx s = 0.0;
  int off = 0, last_ix = -1, last_iy = -1;
  bool ok = false;
  for (const auto& e : f.entries) {
    if (e.ix != last_ix || e.iy != last_iy) {
      last_ix = e.ix;
      last_iy = e.iy;
      ok = sh.t_offset(e.ix, e.iy, &off);
      if (!ok) throw OffGridShift("translate_inner: t-shift not grid-aligned");
    }
    s += e.v * std::conj(dense.get(e.ix + sh.dix(), e.iy + sh.diy(),
                                   e.it + off));
  }
  return s * g.cell();
}

// ---------------------------------------------------------------- convolution

SampledFunction group_convolve(const SampledFunction& f,
                               const SampledFunction& g) {
  require_same(f.grid, g.grid);
  const GridSpec& G = f.grid;
  const int Nt = G.Nt, L = 2 * Nt;
  fftw_complex* buf = fftw_alloc_complex(L);
  fftw_plan fwd = fftw_plan_dft_1d(L, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_1d(L, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  auto* b = reinterpret_cast<cplx*>(buf);

  struct Col {
    int ix, iy;
    std::vector<cplx> spec;
  };
  auto spectra = [&](const SampledFunction& h) {
    std::vector<Col> cols;
    for (int ix = 0; ix < G.Nx; ++ix)
      for (int iy = 0; iy < G.Ny; ++iy) {
        const cplx* src = &h.values[G.index(ix, iy, 0)];
        bool nz = false;
        for (int it = 0; it < Nt && !nz; ++it) nz = src[it] != cplx(0.0);
        if (!nz) continue;
        std::copy(src, src + Nt, b);
        std::fill(b + Nt, b + L, cplx(0.0));
        fftw_execute(fwd);
        cols.push_back({ix, iy, std::vector<cplx>(b, b + L)});
      }
    return cols;
  };
  const std::vector<Col> fc = spectra(f), gc = spectra(g);
  std::vector<int> fidx(static_cast<std::size_t>(G.Nx) * G.Ny, -1);
  for (std::size_t i = 0; i < fc.size(); ++i)
    fidx[static_cast<std::size_t>(fc[i].ix) * G.Ny + fc[i].iy] =
        static_cast<int>(i);

  // H_j(z) = sum_w F_j(z-w) G_j(w) exp(2 pi i j delta / L), where delta is
  // the t-shift (v x - u y)/2 in steps.
  std::vector<cplx> H(static_cast<std::size_t>(G.Nx) * G.Ny * L, cplx(0.0));
  const double pt = G.pt();
  for (const Col& w : gc) {
    const double u = G.x(w.ix), v = G.y(w.iy);
    for (const Col& d : fc) {
      // z - w = d  =>  z index = d + w - N/2
      const int zx = d.ix + w.ix - G.Nx / 2, zy = d.iy + w.iy - G.Ny / 2;
      if (zx < 0 || zx >= G.Nx || zy < 0 || zy >= G.Ny) continue;
      const double delta = 0.5 * (v * G.x(zx) - u * G.y(zy)) * pt;
      cplx* h = &H[(static_cast<std::size_t>(zx) * G.Ny + zy) * L];
      const cplx step = std::polar(1.0, 2.0 * kPi * delta / L);
      cplx ph = 1.0;
      for (int j = 0; j < L / 2; ++j) {
        h[j] += d.spec[j] * w.spec[j] * ph;
        ph *= step;
      }
      // negative frequencies j - L; the Nyquist bin is dropped
      ph = std::polar(1.0, 2.0 * kPi * delta * (1 - L / 2) / L);
      for (int j = L / 2 + 1; j < L; ++j) {
        h[j] += d.spec[j] * w.spec[j] * ph;
        ph *= step;
      }
    }
  }
  SampledFunction out(G);
  const double scale = G.dx() * G.dy() * G.dt() / L;
  for (int zx = 0; zx < G.Nx; ++zx)
    for (int zy = 0; zy < G.Ny; ++zy) {
      const cplx* h = &H[(static_cast<std::size_t>(zx) * G.Ny + zy) * L];
      bool nz = false;
      for (int j = 0; j < L && !nz; ++j) nz = h[j] != cplx(0.0);
      if (!nz) continue;
      std::copy(h, h + L, b);
      fftw_execute(bwd);
      // h[a] = C(a + Nt/2 + delta)
      for (int a = 0; a < Nt; ++a)
        out.at(zx, zy, a) = b[(a + Nt / 2) % L] * scale;
    }
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  fftw_free(buf);
  return out;
}

SampledFunction tilde(const SampledFunction& f) {
  const GridSpec& g = f.grid;
  SampledFunction out(g);
  for (int ix = 1; ix < g.Nx; ++ix)
    for (int iy = 1; iy < g.Ny; ++iy)
      for (int it = 1; it < g.Nt; ++it)
        out.at(ix, iy, it) = std::conj(f.at(g.Nx - ix, g.Ny - iy, g.Nt - it));
  return out;
}

int max_lattice_radius(const GridSpec& g) {
  const int kx = (g.Nx / 2 - 1) / (2 * g.qx);
  const int ky = (g.Ny / 2 - 1) / g.q;
  const int kt = (g.Nt / 2 - 1) / g.pt();
  return std::min({kx, ky, kt});
}

LatticeSamples sample_at_lattice(const SampledFunction& f, int K) {
  const GridSpec& g = f.grid;
  if (K > max_lattice_radius(g))
    throw LatticeOutsideGrid("lattice box K=" + std::to_string(K) +
                             " does not fit the grid");
  LatticeSamples s(K);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Lat p = s.point(i);
    s.values[i] = f.at(g.Nx / 2 + 2 * p.k * g.qx, g.Ny / 2 + p.l * g.q,
                       g.Nt / 2 + p.m * g.pt());
  }
  return s;
}

LatticeSamples sample_at_lattice(const Generator& gen, int K) {
  LatticeSamples s(K);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Lat p = s.point(i);
    s.values[i] = gen.eval(2.0 * p.k, p.l, p.m);
  }
  return s;
}

}  // namespace heis
