/* diagnostics.hpp
 *
 * Fluxes, bulk integrals, mixed norms, dyadic extraction, decay fits and
 * inequality checkers evaluated on evolved grids and slice traces.
 *
 * Conventions: the grid stores psi = r phi; all energies and norms below are
 * written for the scalar field phi.  Spherical reduction multiplies angular
 * integrals by 4 pi; for linear ell > 0 modes the angular factor is
 * normalized so that int |Y|^2 dOmega = 4 pi and |slash-nabla phi|^2
 * integrates to 4 pi l(l+1) phi^2 / r^2.
 *
 * Flux definitions:
 *   E[phi](H_u)      = int ((|L phi|^2 + |snab phi|^2) r^2 + |phi|^2) dv dOm
 *   E[phi](Hbar_v)   = same with Lbar and du
 *   E[phi](Sigma~_vt)= int ((|d_vt phi|^2 + |d_r phi|^2 + |snab phi|^2) r^2
 *                           + |phi|^2) dr dOm
 *   E[phi,p]         = E[phi] + p int |phi|^{p+1} r^2 dcoord dOm
 * Bulk density:
 *   W[phi,p] = |d_r phi|^2/r^2 + (1-3M/r)^2 (|d_vt phi|^2/r^2
 *              + |snab phi|^2/r) + phi^2/r^4 + p |phi|^{p+1}/r,
 * integrated with dvol = 2 r^2 (1-mu) du dv dOm; the log-loss variant
 * replaces (1-3M/r)^2 by (1 - ln|1-3M/r|)^{-2}.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evolve.hpp"
#include "geometry.hpp"
#include "numerics.hpp"

namespace schwave {

inline double trapezoid_nonuniform(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

// field values of phi = psi/r and its derivatives on a slice point
struct PhiJet {
  double phi = 0.0, Lphi = 0.0, Lbphi = 0.0, dvt = 0.0, dr = 0.0;
};

inline PhiJet phi_jet(const SchwarzschildChart& chart, double r, double psi,
                      double Lpsi, double Lbpsi) {
  PhiJet out;
  double om = 1.0 - chart.mu(r);
  out.phi = psi / r;
  out.Lphi = (Lpsi - om * out.phi) / r;
  out.Lbphi = (Lbpsi + om * out.phi) / r;
  out.dvt = 0.5 * (out.Lphi + out.Lbphi);
  out.dr = chart.lambda_prime(r) * out.dvt - out.Lbphi / om;
  return out;
}

struct EnergyReport {
  double energy = 0.0;     // E[phi]
  double energy_p = 0.0;   // E[phi, p]
  double err_est = 0.0;    // Richardson half-resolution difference
};

// flux through a sampled slice; p <= 0 disables the potential term
inline EnergyReport energy_flux(const FieldGrid& grid, const SliceTrace& tr,
                                double p = -1.0) {
  if (tr.psi.size() != tr.coord.size() || tr.Lpsi.size() != tr.coord.size() ||
      tr.Lbpsi.size() != tr.coord.size() || tr.r.size() != tr.coord.size())
    throw std::invalid_argument(
        "energy_flux: trace is missing jet components (psi, Lpsi, Lbpsi, r "
        "must all match the coordinate array)");
  const SchwarzschildChart& chart = grid.chart();
  int ell = grid.config().ell;
  std::vector<double> dens, densp;
  dens.reserve(tr.coord.size());
  for (std::size_t i = 0; i < tr.coord.size(); ++i) {
    double r = tr.r[i];
    PhiJet j = phi_jet(chart, r, tr.psi[i], tr.Lpsi[i], tr.Lbpsi[i]);
    double ang2 = double(ell * (ell + 1)) * j.phi * j.phi / (r * r);
    double d;
    switch (tr.kind) {
      case SliceKind::Hu:
        d = (j.Lphi * j.Lphi + ang2) * r * r + j.phi * j.phi;
        break;
      case SliceKind::Hvbar:
        d = (j.Lbphi * j.Lbphi + ang2) * r * r + j.phi * j.phi;
        break;
      default:
        d = (j.dvt * j.dvt + j.dr * j.dr + ang2) * r * r + j.phi * j.phi;
    }
    dens.push_back(4.0 * pi * d);
    densp.push_back(p > 0.0 ? 4.0 * pi * p *
                                  std::pow(std::abs(j.phi), p + 1.0) * r * r
                            : 0.0);
  }
  EnergyReport rep;
  rep.energy = trapezoid_nonuniform(tr.coord, dens);
  rep.energy_p = rep.energy + trapezoid_nonuniform(tr.coord, densp);
  // half-resolution estimate
  std::vector<double> xh, yh;
  for (std::size_t i = 0; i < tr.coord.size(); i += 2) {
    xh.push_back(tr.coord[i]);
    yh.push_back(dens[i]);
  }
  rep.err_est = std::abs(trapezoid_nonuniform(xh, yh) - rep.energy);
  return rep;
}

// composite slice Sigma_u = (vtilde part for r < R) union (H_u for r >= R);
// the junction is at r = R on H_u where vtilde = 2u + r*(R)
inline EnergyReport energy_sigma_u(const FieldGrid& grid, double u, double R,
                                   double p = -1.0) {
  const SchwarzschildChart& chart = grid.chart();
  double rsR = chart.tortoise(R);
  SliceTrace inner = sample(grid, SliceKind::SigmaTilde, 2.0 * u + rsR);
  SliceTrace outer = sample(grid, SliceKind::Hu, u);
  SliceTrace in2 = inner, out2;
  in2.coord.clear(); in2.psi.clear(); in2.Lpsi.clear(); in2.Lbpsi.clear();
  in2.r.clear();
  for (std::size_t i = 0; i < inner.coord.size(); ++i)
    if (inner.r[i] <= R) {
      in2.coord.push_back(inner.coord[i]);
      in2.psi.push_back(inner.psi[i]);
      in2.Lpsi.push_back(inner.Lpsi[i]);
      in2.Lbpsi.push_back(inner.Lbpsi[i]);
      in2.r.push_back(inner.r[i]);
    }
  out2 = outer;
  out2.coord.clear(); out2.psi.clear(); out2.Lpsi.clear();
  out2.Lbpsi.clear(); out2.r.clear();
  for (std::size_t i = 0; i < outer.coord.size(); ++i)
    if (outer.r[i] >= R) {
      out2.coord.push_back(outer.coord[i]);
      out2.psi.push_back(outer.psi[i]);
      out2.Lpsi.push_back(outer.Lpsi[i]);
      out2.Lbpsi.push_back(outer.Lbpsi[i]);
      out2.r.push_back(outer.r[i]);
    }
  EnergyReport a = energy_flux(grid, in2, p);
  EnergyReport b = energy_flux(grid, out2, p);
  EnergyReport rep;
  rep.energy = a.energy + b.energy;
  rep.energy_p = a.energy_p + b.energy_p;
  rep.err_est = a.err_est + b.err_est;
  return rep;
}

// --- bulk integrals --------------------------------------------------------

struct Region {
  double u1 = 0.0, u2 = 0.0, v1 = 0.0, v2 = 0.0;
  double r_min = 0.0;  // optional extra clip, e.g. 2.05 M
  double r_max = 1e300;
};

namespace diagnostics_detail {

// generic 2-d trapezoid of a node-density over the clipped grid rectangle
template <class Density>
double bulk_integral(const FieldGrid& grid, const Region& reg, Density&& dens) {
  const EvolutionConfig& cfg = grid.config();
  double h = cfg.h;
  auto clampi = [&](double x, double lo, std::size_t n) {
    long i = std::lround(std::ceil((x - lo) / h - 1e-9));
    if (i < 0) i = 0;
    if (i > long(n - 1)) i = long(n - 1);
    return std::size_t(i);
  };
  std::size_t iu1 = clampi(reg.u1, cfg.u0, grid.nu());
  std::size_t iv1 = clampi(reg.v1, cfg.v0, grid.nv());
  std::size_t iu2 = std::min<std::size_t>(
      grid.nu() - 1, std::size_t(std::max(0L, std::lround(std::floor(
                         (reg.u2 - cfg.u0) / h + 1e-9)))));
  std::size_t iv2 = std::min<std::size_t>(
      grid.nv() - 1, std::size_t(std::max(0L, std::lround(std::floor(
                         (reg.v2 - cfg.v0) / h + 1e-9)))));
  if (iu2 <= iu1 || iv2 <= iv1) return 0.0;
  double total = 0.0;
  for (std::size_t iu = iu1; iu <= iu2; ++iu) {
    double wu = (iu == iu1 || iu == iu2) ? 0.5 : 1.0;
    for (std::size_t iv = iv1; iv <= iv2; ++iv) {
      double r = grid.r_at(iu, iv);
      if (r < reg.r_min || r > reg.r_max) continue;
      double wv = (iv == iv1 || iv == iv2) ? 0.5 : 1.0;
      total += wu * wv * dens(iu, iv, r);
    }
  }
  return total * h * h;
}

}  // namespace diagnostics_detail

// degeneracy weight on the photon-sphere line: (1-3M/r)^2, or the log-loss
// variant (1 - ln|1-3M/r|)^{-2}; both vanish (continuously) at r = 3M
inline double photon_sphere_weight(double M, double r, bool log_loss) {
  double x = 1.0 - 3.0 * M / r;
  if (!log_loss) return x * x;
  if (x == 0.0) return 0.0;
  double l = 1.0 - std::log(std::abs(x));
  return 1.0 / (l * l);
}

// Morawetz bulk integral of W[phi,p]; the log_loss flag swaps the
// photon-sphere weight for (1 - ln|1-3M/r|)^{-2}
inline double morawetz_bulk(const FieldGrid& grid, const Region& reg, double p,
                            bool log_loss = false) {
  const SchwarzschildChart& chart = grid.chart();
  int ell = grid.config().ell;
  auto dens = [&](std::size_t iu, std::size_t iv, double r) {
    auto j0 = grid.jet_at(grid.u_of(iu), grid.v_of(iv));
    PhiJet j = phi_jet(chart, r, j0.psi, j0.Lpsi, j0.Lbpsi);
    double om = 1.0 - chart.mu(r);
    double wgt = photon_sphere_weight(chart.M, r, log_loss);
    double ang2 = double(ell * (ell + 1)) * j.phi * j.phi / (r * r);
    double W = j.dr * j.dr / (r * r) +
               wgt * (j.dvt * j.dvt / (r * r) + ang2 / r) +
               j.phi * j.phi / (r * r * r * r);
    if (p > 0.0) W += p * std::pow(std::abs(j.phi), p + 1.0) / r;
    return 4.0 * pi * W * 2.0 * r * r * om;
  };
  return diagnostics_detail::bulk_integral(grid, reg, dens);
}

inline double le_norm(const FieldGrid& grid, const Region& reg) {
  return morawetz_bulk(grid, reg, -1.0, true);
}

// unweighted local energy over the region (no photon-sphere degeneracy);
// used to demonstrate trapping against the log-loss norm
inline double unweighted_local_energy(const FieldGrid& grid, const Region& reg) {
  const SchwarzschildChart& chart = grid.chart();
  int ell = grid.config().ell;
  auto dens = [&](std::size_t iu, std::size_t iv, double r) {
    auto j0 = grid.jet_at(grid.u_of(iu), grid.v_of(iv));
    PhiJet j = phi_jet(chart, r, j0.psi, j0.Lpsi, j0.Lbpsi);
    double om = 1.0 - chart.mu(r);
    double ang2 = double(ell * (ell + 1)) * j.phi * j.phi / (r * r);
    double W = j.dr * j.dr / (r * r) + j.dvt * j.dvt / (r * r) + ang2 / r +
               j.phi * j.phi / (r * r * r * r);
    return 4.0 * pi * W * 2.0 * r * r * om;
  };
  return diagnostics_detail::bulk_integral(grid, reg, dens);
}

// --- mixed norms -----------------------------------------------------------

inline void require_admissible(double p1, double q1) {
  if (!(q1 >= 6.0 && std::isfinite(q1)))
    throw std::invalid_argument(
        "strichartz_norm: q1 outside [6, infinity) (admissibility)");
  if (std::abs(1.0 / p1 + 3.0 / q1 - 0.5) > 1e-12)
    throw std::invalid_argument(
        "strichartz_norm: 1/p1 + 3/q1 != 1/2 (admissibility)");
}

// L^{p1}_{vtilde} L^{q1}_x over vtilde in [vt1, vt2], slices every dvt
inline double strichartz_norm(const FieldGrid& grid, double vt1, double vt2,
                              double dvt, double p1, double q1) {
  require_admissible(p1, q1);
  std::vector<double> ts, vals;
  for (double vt = vt1; vt <= vt2 + 1e-9; vt += dvt) {
    SliceTrace tr = sample(grid, SliceKind::SigmaTilde, vt);
    std::vector<double> dens;
    for (std::size_t i = 0; i < tr.coord.size(); ++i) {
      double phi = tr.psi[i] / tr.r[i];
      dens.push_back(4.0 * pi * std::pow(std::abs(phi), q1) * tr.r[i] *
                     tr.r[i]);
    }
    double lq = std::pow(trapezoid_nonuniform(tr.coord, dens), 1.0 / q1);
    ts.push_back(vt);
    vals.push_back(std::pow(lq, p1));
  }
  return std::pow(trapezoid_nonuniform(ts, vals), 1.0 / p1);
}

// int_{H_u, r >= r_min} r^gamma |L(r phi)|^2 dv dOmega; L(r phi) = L psi
inline double rweighted_flux(const FieldGrid& grid, double u, double gamma,
                             double r_min = 0.0) {
  SliceTrace tr = sample(grid, SliceKind::Hu, u);
  std::vector<double> dens;
  for (std::size_t i = 0; i < tr.coord.size(); ++i) {
    double d = (tr.r[i] >= r_min)
                   ? 4.0 * pi * std::pow(tr.r[i], gamma) * tr.Lpsi[i] *
                         tr.Lpsi[i]
                   : 0.0;
    dens.push_back(d);
  }
  return trapezoid_nonuniform(tr.coord, dens);
}

// --- dyadic extraction and decay fits --------------------------------------

struct DyadicReport {
  std::vector<double> u, B;
  bool truncated = false;
  double bound_constant = 0.0;  // sup u_k B(u_k) (1 - 2/Lambda) / int B
};

inline DyadicReport extract_dyadic(const std::vector<double>& u,
                                   const std::vector<double>& B,
                                   double Lambda) {
  if (Lambda <= 2.0)
    throw std::invalid_argument("extract_dyadic: Lambda must exceed 2");
  if (u.size() != B.size() || u.size() < 4)
    throw std::invalid_argument("extract_dyadic: degenerate series");
  // integrability heuristic: the log-log slope over the trailing half must
  // be steeper than -1 (B ~ 1/u has a divergent integral)
  std::vector<double> lx, ly;
  for (std::size_t i = u.size() / 2; i < u.size(); ++i)
    if (u[i] > 0.0 && B[i] > 0.0) {
      lx.push_back(std::log(u[i]));
      ly.push_back(std::log(B[i]));
    }
  if (lx.size() >= 2) {
    double slope = fit_line(lx, ly).slope;
    if (slope >= -1.0)
      throw std::runtime_error(
          "extract_dyadic: series decays like 1/u or slower; integral "
          "diverges");
  }
  double total = trapezoid_nonuniform(u, B);
  DyadicReport rep;
  double uk = u.front();
  double Bk = B.front();
  rep.u.push_back(uk);
  rep.B.push_back(Bk);
  while (true) {
    double lo = 2.0 * uk, hi = Lambda * uk;
    if (hi > u.back()) {
      rep.truncated = lo > u.back();
      break;
    }
    double best = 1e300, bu = lo;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] >= lo && u[i] <= hi && B[i] < best) {
        best = B[i];
        bu = u[i];
      }
    uk = bu;
    rep.u.push_back(bu);
    rep.B.push_back(best);
  }
  for (std::size_t i = 0; i < rep.u.size(); ++i)
    rep.bound_constant =
        std::max(rep.bound_constant,
                 rep.u[i] * rep.B[i] * (1.0 - 2.0 / Lambda) / total);
  return rep;
}

struct DecayFit {
  double exponent = 0.0;   // y ~ t^{-exponent}
  double residual = 0.0;   // rms of log residuals
  double sub[3] = {0, 0, 0};  // exponents on three sub-windows
};

inline DecayFit fit_decay(const std::vector<double>& t,
                          const std::vector<double>& y, double t1, double t2) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t1 && t[i] <= t2) {
      if (!(y[i] > 0.0))
        throw std::invalid_argument("fit_decay: nonpositive value in window");
      lx.push_back(std::log(t[i]));
      ly.push_back(std::log(y[i]));
    }
  if (lx.size() < 4)
    throw std::invalid_argument("fit_decay: window too sparse");
  LineFit f = fit_line(lx, ly);
  DecayFit out;
  out.exponent = -f.slope;
  out.residual = f.rms_residual;
  for (int s = 0; s < 3; ++s) {
    // geometric thirds of the window
    double a = t1 * std::pow(t2 / t1, double(s) / 3.0);
    double b = t1 * std::pow(t2 / t1, double(s + 1) / 3.0);
    std::vector<double> sx, sy;
    for (std::size_t i = 0; i < lx.size(); ++i)
      if (lx[i] >= std::log(a) - 1e-12 && lx[i] <= std::log(b) + 1e-12) {
        sx.push_back(lx[i]);
        sy.push_back(ly[i]);
      }
    out.sub[s] = (sx.size() >= 2) ? -fit_line(sx, sy).slope : out.exponent;
  }
  return out;
}

// --- inequality checkers ---------------------------------------------------

// trace inequality ratio r ||phi||^2_{L^4_omega} / E on a slice;
// spherically symmetric reduction: ||phi||^2_{L^4_omega} = sqrt(4 pi) phi^2
inline double check_trace(double r, double phi, double energy) {
  if (energy <= 0.0) return 0.0;
  return r * std::sqrt(4.0 * pi) * phi * phi / energy;
}

struct LpLemmaReport {
  double near_l2 = 0.0;       // ||f||^2_{L^2(Omega1)}
  double near_bound = 0.0;    // |Omega1|^{(q-2)/q} ||f||^2_{L^q}
  double far_l2 = 0.0;        // ||f||^2_{L^2(Omega2)}
  double far_bound = 0.0;     // N ln t * int_{Omega2} f^2 / |ln||x|-1||
  bool holds = false;
};

// radial f on the shell 1/2 <= |x| <= 3/2; Omega1 = {||x|-1| <= t^{-N}}
inline LpLemmaReport check_lp_lemma(const std::function<double(double)>& f,
                                    double t, double N, double q) {
  if (!(t >= 2.0 && q > 2.0 && N > 1.0))
    throw std::invalid_argument("check_lp_lemma: need t >= 2, q > 2, N > 1");
  double eps = std::pow(t, -N);
  auto vol = [](double rho) { return 4.0 * pi * rho * rho; };
  auto integrate = [&](auto&& g, double a, double b) {
    if (b <= a) return 0.0;
    return adaptive_simpson([&](double x) { return g(x); }, a, b, 1e-13);
  };
  double a1 = std::max(0.5, 1.0 - eps), b1 = std::min(1.5, 1.0 + eps);
  LpLemmaReport rep;
  rep.near_l2 = integrate([&](double x) { return f(x) * f(x) * vol(x); }, a1, b1);
  double omega1 = integrate(vol, a1, b1);
  double lq = std::pow(
      integrate([&](double x) { return std::pow(std::abs(f(x)), q) * vol(x); },
                0.5, 1.5),
      1.0 / q);
  rep.near_bound = std::pow(omega1, (q - 2.0) / q) * lq * lq;
  auto far_piece = [&](double lo, double hi, auto&& g) {
    return integrate(g, lo, hi);
  };
  auto f2 = [&](double x) { return f(x) * f(x) * vol(x); };
  auto f2log = [&](double x) {
    return f(x) * f(x) / std::abs(std::log(std::abs(x - 1.0))) * vol(x);
  };
  rep.far_l2 = far_piece(0.5, a1, f2) + far_piece(b1, 1.5, f2);
  rep.far_bound =
      N * std::log(t) * (far_piece(0.5, a1, f2log) + far_piece(b1, 1.5, f2log));
  rep.holds = rep.near_l2 <= rep.near_bound * (1.0 + 1e-9) + 1e-300 &&
              rep.far_l2 <= rep.far_bound * (1.0 + 1e-9) + 1e-300;
  return rep;
}

struct BetterRLReport {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

// || r phi(r2) ||^{q1}_{L^{q1}_omega} against the r1-value plus the weighted
// flux; q1 = 2 gamma is excluded by the underlying interpolation
inline BetterRLReport check_betterrl(const FieldGrid& grid, double u, double r1,
                                     double r2, double q1, double gamma,
                                     double energy) {
  if (std::abs(q1 - 2.0 * gamma) < 1e-12)
    throw std::invalid_argument("check_betterrl: q1 == 2 gamma excluded");
  if (!(r2 >= r1)) throw std::invalid_argument("check_betterrl: r2 < r1");
  const SchwarzschildChart& chart = grid.chart();
  auto rpsi_at = [&](double r) {
    double v = u + chart.tortoise(r);
    return grid.jet_at(u, v).psi;  // psi = r phi already
  };
  double flux = rweighted_flux(grid, u, gamma, r1);
  BetterRLReport rep;
  rep.lhs = 4.0 * pi * std::pow(std::abs(rpsi_at(r2)), q1);
  rep.rhs = 4.0 * pi * std::pow(std::abs(rpsi_at(r1)), q1) +
            (std::pow(r1, 0.5 * q1 - gamma) + std::pow(r2, 0.5 * q1 - gamma)) *
                std::pow(energy, 0.5 * (q1 - 2.0)) * flux;
  rep.ratio = (rep.rhs > 0.0) ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

}  // namespace schwave
