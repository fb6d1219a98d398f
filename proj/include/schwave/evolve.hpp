/* evolve.hpp
 *
 * Characteristic (double-null) evolution of the spherically symmetric
 * defocusing wave equation on the Schwarzschild exterior.  With psi = r phi
 * the reduced equation is
 *   d_u d_v psi = -V psi - (1-mu) r^{1-p} |psi|^{p-1} psi,
 *   V = (1-mu)(l(l+1)/r^2 + 2M/r^3)   (l = 0 for nonlinear runs),
 * integrated on a null rectangle [u0,umax] x [v0,vmax] by the standard
 * second-order diamond scheme with a fixed-point midpoint correction.
 *
 * Initial data: a purely outgoing compact pulse on {u = u0},
 *   psi(u0, v) = A (1 - xi^2)^4, xi = (r* - c)/w,  psi(u, v0) constant.
 *
 * The radius r(u,v) depends only on v - u and is cached per diagonal.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace schwave {

struct EvolutionConfig {
  double M = 1.0;
  double p = 3.0;           // nonlinearity power in (1,5)
  double amplitude = 1.0;   // pulse amplitude A
  double center = 20.0;     // pulse center in r*
  double width = 5.0;       // pulse half-width in r*
  double h = 0.25;          // grid spacing in u and v
  double u0 = 0.0, umax = 100.0;
  double v0 = 0.0, vmax = 200.0;
  bool nonlinear = true;
  bool potential = true;    // include V; off gives the flat d'Alembert wave
  int ell = 0;              // angular mode, linear runs only
  double fp_tol = 1e-12;    // fixed-point tolerance of the diamond update
};

class FieldGrid {
 public:
  FieldGrid(const EvolutionConfig& cfg)
      : cfg_(cfg), chart_(cfg.M) {
    if (!(cfg.p > 1.0 && cfg.p < 5.0))
      throw std::invalid_argument("FieldGrid: p outside (1,5)");
    if (!(cfg.h > 0.0)) throw std::invalid_argument("FieldGrid: h <= 0");
    if (cfg.nonlinear && cfg.ell != 0)
      throw std::invalid_argument("FieldGrid: nonlinear runs are ell = 0");
    nu_ = std::size_t(std::llround((cfg.umax - cfg.u0) / cfg.h)) + 1;
    nv_ = std::size_t(std::llround((cfg.vmax - cfg.v0) / cfg.h)) + 1;
    if (nu_ < 2 || nv_ < 2)
      throw std::invalid_argument("FieldGrid: degenerate domain");
    psi_.assign(nu_ * nv_, 0.0);
    // r and 1-mu per diagonal d = v - u = (v0-u0) + (iv-iu) h
    r_diag_.resize(nu_ + nv_ - 1);
    for (std::size_t i = 0; i < r_diag_.size(); ++i) {
      double d = (cfg.v0 - cfg.u0) +
                 (double(i) - double(nu_ - 1)) * cfg.h;
      r_diag_[i] = chart_.radius_from_tortoise(d);
    }
  }

  const EvolutionConfig& config() const { return cfg_; }
  const SchwarzschildChart& chart() const { return chart_; }
  std::size_t nu() const { return nu_; }
  std::size_t nv() const { return nv_; }
  double u_of(std::size_t iu) const { return cfg_.u0 + double(iu) * cfg_.h; }
  double v_of(std::size_t iv) const { return cfg_.v0 + double(iv) * cfg_.h; }
  double r_at(std::size_t iu, std::size_t iv) const {
    return r_diag_[iv + (nu_ - 1) - iu];
  }
  double& psi(std::size_t iu, std::size_t iv) { return psi_[iu * nv_ + iv]; }
  double psi(std::size_t iu, std::size_t iv) const {
    return psi_[iu * nv_ + iv];
  }
  const std::vector<double>& data() const { return psi_; }

  // cubic Lagrange interpolation of psi and its null derivatives at (u,v)
  struct Jet {
    double psi = 0.0, Lpsi = 0.0, Lbpsi = 0.0;
  };
  Jet jet_at(double u, double v) const {
    double x = (u - cfg_.u0) / cfg_.h;
    double y = (v - cfg_.v0) / cfg_.h;
    if (x < -1e-9 || x > double(nu_ - 1) + 1e-9 || y < -1e-9 ||
        y > double(nv_ - 1) + 1e-9)
      throw std::out_of_range("FieldGrid::jet_at: point outside grid");
    auto base = [](double t, std::size_t n) {
      long i = std::lround(std::floor(t)) - 1;
      if (i < 0) i = 0;
      if (i > long(n) - 4) i = long(n) - 4;
      return std::size_t(i);
    };
    std::size_t i0 = base(x, nu_), j0 = base(y, nv_);
    double wx[4], dwx[4], wy[4], dwy[4];
    lagrange(x - double(i0), wx, dwx);
    lagrange(y - double(j0), wy, dwy);
    Jet out;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double val = psi(i0 + a, j0 + b);
        out.psi += wx[a] * wy[b] * val;
        out.Lbpsi += dwx[a] * wy[b] * val / cfg_.h;
        out.Lpsi += wx[a] * dwy[b] * val / cfg_.h;
      }
    return out;
  }

 private:
  static void lagrange(double t, double w[4], double dw[4]) {
    // nodes 0,1,2,3
    static const double node[4] = {0.0, 1.0, 2.0, 3.0};
    for (int a = 0; a < 4; ++a) {
      double num = 1.0, den = 1.0, dnum = 0.0;
      for (int b = 0; b < 4; ++b) {
        if (b == a) continue;
        den *= node[a] - node[b];
      }
      for (int b = 0; b < 4; ++b) {
        if (b == a) continue;
        double prod = 1.0;
        for (int c = 0; c < 4; ++c) {
          if (c == a || c == b) continue;
          prod *= t - node[c];
        }
        dnum += prod;
        num *= t - node[b];
      }
      w[a] = num / den;
      dw[a] = dnum / den;
    }
  }

  EvolutionConfig cfg_;
  SchwarzschildChart chart_;
  std::size_t nu_ = 0, nv_ = 0;
  std::vector<double> psi_;
  std::vector<double> r_diag_;
};

// characteristic data: outgoing compact pulse
inline double initial_pulse(const EvolutionConfig& cfg, double rstar) {
  double xi = (rstar - cfg.center) / cfg.width;
  if (std::abs(xi) >= 1.0) return 0.0;
  double b = 1.0 - xi * xi;
  double b2 = b * b;
  return cfg.amplitude * b2 * b2;
}

inline void initial_data(FieldGrid& grid) {
  const EvolutionConfig& cfg = grid.config();
  double lo = cfg.v0 - cfg.u0, hi = cfg.vmax - cfg.u0;
  if (!(cfg.center - cfg.width > lo && cfg.center + cfg.width < hi))
    throw std::invalid_argument(
        "initial_data: pulse support not inside the initial segment");
  for (std::size_t iv = 0; iv < grid.nv(); ++iv)
    grid.psi(0, iv) = initial_pulse(cfg, grid.v_of(iv) - cfg.u0);
  double corner = grid.psi(0, 0);
  for (std::size_t iu = 1; iu < grid.nu(); ++iu) grid.psi(iu, 0) = corner;
}

// right-hand side F(psi, r) of d_u d_v psi = F
inline double reduced_rhs(const EvolutionConfig& cfg,
                          const SchwarzschildChart& chart, double psi,
                          double r) {
  double om = 1.0 - chart.mu(r);
  double out = 0.0;
  if (cfg.potential) {
    double V = om * (double(cfg.ell * (cfg.ell + 1)) / (r * r) +
                     2.0 * cfg.M / (r * r * r));
    out = -V * psi;
  }
  if (cfg.nonlinear) {
    double nl;
    if (cfg.p == 3.0) nl = psi * psi * psi / (r * r);
    else nl = std::pow(std::abs(psi), cfg.p - 1.0) * psi * std::pow(r, 1.0 - cfg.p);
    out -= om * nl;
  }
  return out;
}

// one diamond update: corners S=(u,v), W=(u+h,v), E=(u,v+h) -> N=(u+h,v+h);
// r_c is the radius at the cell center (same diagonal as S)
inline double step_diamond(const EvolutionConfig& cfg,
                           const SchwarzschildChart& chart, double psiS,
                           double psiW, double psiE, double r_c, double u,
                           double v) {
  double h2 = cfg.h * cfg.h;
  double mid = 0.5 * (psiE + psiW);
  double psiN = psiE + psiW - psiS + h2 * reduced_rhs(cfg, chart, mid, r_c);
  for (int it = 0; it < 25; ++it) {
    double mid2 = 0.25 * (psiE + psiW + psiS + psiN);
    double next = psiE + psiW - psiS + h2 * reduced_rhs(cfg, chart, mid2, r_c);
    double delta = std::abs(next - psiN);
    psiN = next;
    if (delta <= cfg.fp_tol * (1.0 + std::abs(psiN))) break;
    if (it == 24)
      throw std::runtime_error("step_diamond: fixed point stalled at (u,v)=(" +
                               std::to_string(u) + "," + std::to_string(v) +
                               ")");
  }
  if (!std::isfinite(psiN))
    throw std::runtime_error("step_diamond: NaN at (u,v)=(" +
                             std::to_string(u) + "," + std::to_string(v) + ")");
  return psiN;
}

// sweep the interior given data on the two initial null segments
inline void propagate(FieldGrid& grid) {
  const EvolutionConfig& cfg = grid.config();
  const SchwarzschildChart& chart = grid.chart();
  for (std::size_t iu = 1; iu < grid.nu(); ++iu) {
    for (std::size_t iv = 1; iv < grid.nv(); ++iv) {
      double r_c = grid.r_at(iu - 1, iv - 1);
      grid.psi(iu, iv) =
          step_diamond(cfg, chart, grid.psi(iu - 1, iv - 1),
                       grid.psi(iu, iv - 1), grid.psi(iu - 1, iv), r_c,
                       grid.u_of(iu), grid.v_of(iv));
    }
  }
}

inline FieldGrid evolve(const EvolutionConfig& cfg) {
  FieldGrid grid(cfg);
  initial_data(grid);
  propagate(grid);
  return grid;
}

// --- slicing ---------------------------------------------------------------

enum class SliceKind { Hu, Hvbar, SigmaTilde };

struct SliceTrace {
  SliceKind kind = SliceKind::Hu;
  double level = 0.0;              // u, v, or vtilde
  std::vector<double> coord;       // v (Hu), u (Hvbar), r (SigmaTilde)
  std::vector<double> psi, Lpsi, Lbpsi, r;
};

// sample a null or vtilde slice with grid-spaced parameterization
inline SliceTrace sample(const FieldGrid& grid, SliceKind kind, double level) {
  const EvolutionConfig& cfg = grid.config();
  const SchwarzschildChart& chart = grid.chart();
  SliceTrace tr;
  tr.kind = kind;
  tr.level = level;
  auto push = [&](double coord, double u, double v) {
    auto j = grid.jet_at(u, v);
    tr.coord.push_back(coord);
    tr.psi.push_back(j.psi);
    tr.Lpsi.push_back(j.Lpsi);
    tr.Lbpsi.push_back(j.Lbpsi);
    tr.r.push_back(chart.radius_from_tortoise(v - u));
  };
  if (kind == SliceKind::Hu) {
    if (level < cfg.u0 - 1e-12 || level > cfg.umax + 1e-12)
      throw std::out_of_range("sample: u level outside [" +
                              std::to_string(cfg.u0) + "," +
                              std::to_string(cfg.umax) + "]");
    for (std::size_t iv = 0; iv < grid.nv(); ++iv)
      push(grid.v_of(iv), level, grid.v_of(iv));
  } else if (kind == SliceKind::Hvbar) {
    if (level < cfg.v0 - 1e-12 || level > cfg.vmax + 1e-12)
      throw std::out_of_range("sample: v level outside [" +
                              std::to_string(cfg.v0) + "," +
                              std::to_string(cfg.vmax) + "]");
    for (std::size_t iu = 0; iu < grid.nu(); ++iu)
      push(grid.u_of(iu), grid.u_of(iu), level);
  } else {
    // vtilde slice: v = (vtilde + lambda(r))/2, u = v - r*(r); start at the
    // inner measurement radius and march outward in r* with grid spacing
    double r_in = 2.05 * cfg.M;
    double rs = chart.tortoise(r_in);
    bool any = false;
    for (;; rs += cfg.h) {
      double r = chart.radius_from_tortoise(rs);
      double v = 0.5 * (level + chart.lambda_eval(r).lambda);
      double u = v - rs;
      if (v > cfg.vmax) break;  // v grows monotonically with r*
      if (u < cfg.u0) break;    // u declines monotonically with r*
      if (u > cfg.umax || v < cfg.v0) continue;
      push(r, u, v);
      any = true;
    }
    if (!any)
      throw std::out_of_range(
          "sample: vtilde slice misses the computed rectangle; reachable "
          "levels satisfy u0 <= (vtilde + lambda - 2 r*)/2 and v <= vmax");
  }
  return tr;
}

}  // namespace schwave
