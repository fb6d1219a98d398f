/* identity.hpp
 *
 * Numerical verification of the energy identity
 *   div P[psi,X,q,m,k] = box(psi)(X psi + q psi)
 *                        - k/(p+1) div(X |psi|^{p+1}) + Q[psi,X,q,m]
 * on analytic test fields psi(u,v,theta) = psi_r(u,v) Y(theta), Y in {1,cos}.
 * The left side is assembled by 4th-order centered differencing of the
 * current components in the double-null chart,
 *   div P = [-(d_u(r^2 P_v) + d_v(r^2 P_u)) + 2(1-mu) d_theta(sin P_theta)/sin]
 *           / (2 (1-mu) r^2),
 * the right side from the closed-form densities.  Also verifies the closed
 * r-weighted current formulas against a definition-based assembly, and the
 * spherically symmetric reduction box(phi) = -((d_u d_v + V0)(r phi))/((1-mu) r).
 */
#pragma once

#include <cmath>
#include <stdexcept>

#include "currents.hpp"
#include "geometry.hpp"
#include "morawetz.hpp"
#include "numerics.hpp"
#include "rweight.hpp"

namespace schwave {

// analytic test field: separable radial part times a spherical factor with
// ell in {0,1} (Y = 1 or cos theta)
struct TestField {
  enum class Kind { gaussian, polybump };
  Kind kind = Kind::gaussian;
  int ell = 0;
  double A = 1.0;
  double uc = 0.0, vc = 0.0;
  double wu = 1.0, wv = 1.0;

  double psi_r(double u, double v) const {
    if (kind == Kind::gaussian)
      return A * std::exp(-au() * sq(u - uc) - av() * sq(v - vc));
    double x = (v - vc) / wv;
    return A * (u - uc) * bump(x);
  }
  double du(double u, double v) const {
    if (kind == Kind::gaussian) return -2.0 * au() * (u - uc) * psi_r(u, v);
    return A * bump((v - vc) / wv);
  }
  double dv(double u, double v) const {
    if (kind == Kind::gaussian) return -2.0 * av() * (v - vc) * psi_r(u, v);
    double x = (v - vc) / wv;
    return A * (u - uc) * dbump(x) / wv;
  }
  double dudv(double u, double v) const {
    if (kind == Kind::gaussian)
      return 4.0 * au() * av() * (u - uc) * (v - vc) * psi_r(u, v);
    return A * dbump((v - vc) / wv) / wv;
  }
  double Y(double th) const { return ell == 0 ? 1.0 : std::cos(th); }
  double dY(double th) const { return ell == 0 ? 0.0 : -std::sin(th); }

 private:
  static double sq(double x) { return x * x; }
  double au() const { return 1.0 / (2.0 * wu * wu); }
  double av() const { return 1.0 / (2.0 * wv * wv); }
  static double bump(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
  }
  static double dbump(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    double d = 1.0 - x * x;
    return -2.0 * x / (d * d) * bump(x);
  }
};

struct IdentityReport {
  double err_h = 0.0;   // max relative error at step h
  double err_h2 = 0.0;  // max relative error at step h/2
  double order = 0.0;   // observed convergence order log2(err_h / err_h2)
};

namespace identity_detail {

// scalar jet of the full field at (u, v, theta)
inline UVJet field_jet(const TestField& f, double u, double v, double th,
                       double r) {
  UVJet j;
  double Y = f.Y(th);
  j.psi = f.psi_r(u, v) * Y;
  j.du = f.du(u, v) * Y;
  j.dv = f.dv(u, v) * Y;
  j.ang = std::abs(f.dY(th)) * std::abs(f.psi_r(u, v)) / r;
  return j;
}

// box psi for the separable field (angular Laplacian = -ell(ell+1)/r^2)
inline double box_psi(const SchwarzschildChart& chart, const TestField& f,
                      double u, double v, double th, double r) {
  double om = 1.0 - chart.mu(r);
  double Y = f.Y(th);
  double lap_ang = -double(f.ell * (f.ell + 1)) / (r * r) * f.psi_r(u, v) * Y;
  return -f.dudv(u, v) * Y / om + (f.dv(u, v) - f.du(u, v)) * Y / r + lap_ang;
}

}  // namespace identity_detail

// evaluator interface: a multiplier family provides the current components
// and closed-form right-hand side at a point
struct CurrentFamily {
  // r^2 P_u, r^2 P_v, P_theta factor (P_theta = d_theta psi (X psi + q psi))
  std::function<double(double u, double v, double th)> r2Pu, r2Pv;
  std::function<double(double u, double v, double th)> Xq_psi;  // X psi + q psi
  std::function<double(double u, double v, double th)> rhs;     // closed forms
};

// max relative error of the divergence identity over sample points
inline IdentityReport verify_divergence(const SchwarzschildChart& chart,
                                        const TestField& field,
                                        const CurrentFamily& fam, double h,
                                        int npoints, std::uint64_t seed) {
  SplitMix64 rng(seed);
  IdentityReport rep;
  auto P_theta = [&](double u, double v, double th) {
    return field.dY(th) * field.psi_r(u, v) * fam.Xq_psi(u, v, th);
  };
  for (int it = 0; it < npoints; ++it) {
    double r0 = rng.uniform(2.3, 40.0);
    double u = rng.uniform(-3.0, 3.0);
    double v = u + chart.tortoise(r0);
    double th = rng.uniform(0.4, pi - 0.4);
    for (int half = 0; half < 2; ++half) {
      double hh = half ? 0.5 * h : h;
      double lhs_uv =
          -deriv4([&](double uu) { return fam.r2Pv(uu, v, th); }, u, hh) -
          deriv4([&](double vv) { return fam.r2Pu(u, vv, th); }, v, hh);
      double om = 1.0 - chart.mu(r0);
      double lhs_th = 2.0 * om *
                      deriv4([&](double t) { return std::sin(t) * P_theta(u, v, t); },
                             th, hh) /
                      std::sin(th);
      double lhs = (lhs_uv + lhs_th) / (2.0 * om * r0 * r0);
      double rhs = fam.rhs(u, v, th);
      double scale = std::abs(rhs) + std::abs(lhs) + 1e-6;
      double err = std::abs(lhs - rhs) / scale;
      if (std::isnan(lhs) || std::isnan(rhs))
        throw std::runtime_error("verify_divergence: NaN encountered");
      (half ? rep.err_h2 : rep.err_h) =
          std::max(half ? rep.err_h2 : rep.err_h, err);
    }
  }
  rep.order = std::log2(rep.err_h / rep.err_h2);
  return rep;
}

// --- concrete families -----------------------------------------------------

// Morawetz multiplier (radial, u-independent); k = 0 or 1
inline CurrentFamily morawetz_family(const SchwarzschildChart& chart,
                                     const MultiplierSpec& spec,
                                     const TestField& field, int k, double p) {
  auto jet = [&chart, field](double u, double v, double th, double& r,
                             double& om) {
    r = chart.radius_of({Chart::UV, u, v});
    om = 1.0 - chart.mu(r);
    return identity_detail::field_jet(field, u, v, th, r);
  };
  CurrentFamily fam;
  fam.r2Pu = [&chart, spec, field, jet, k, p](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    MultiplierValues mv = morawetz_multiplier_values(chart, spec, r);
    return r * r * current_Pu(om, j, mv, k, p);
  };
  fam.r2Pv = [&chart, spec, field, jet, k, p](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    MultiplierValues mv = morawetz_multiplier_values(chart, spec, r);
    return r * r * current_Pv(om, j, mv, k, p);
  };
  fam.Xq_psi = [&chart, spec, field, jet](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    MultiplierValues mv = morawetz_multiplier_values(chart, spec, r);
    return mv.Vu * j.du + mv.Vv * j.dv + mv.q * j.psi;
  };
  fam.rhs = [&chart, spec, field, jet, k, p](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    MultiplierValues mv = morawetz_multiplier_values(chart, spec, r);
    double Xqpsi = mv.Vu * j.du + mv.Vv * j.dv + mv.q * j.psi;
    double box = identity_detail::box_psi(chart, field, u, v, th, r);
    double rhs = box * Xqpsi + current_Q(om, r, j, mv);
    if (k != 0) {
      double Xpsi = mv.Vu * j.du + mv.Vv * j.dv;
      double pot = std::pow(std::abs(j.psi), p + 1.0);
      double Xpot = (p + 1.0) * std::pow(std::abs(j.psi), p - 1.0) * j.psi * Xpsi;
      rhs -= (divX_fn(chart, spec, r) * pot + Xpot) / (p + 1.0);
    }
    return rhs;
  };
  return fam;
}

// Killing multiplier X = d_t, q = m = 0: vanishing deformation
inline CurrentFamily killing_family(const SchwarzschildChart& chart,
                                    const TestField& field) {
  MultiplierValues mv;
  mv.Vu = 0.5;
  mv.Vv = 0.5;
  auto jet = [&chart, field](double u, double v, double th, double& r,
                             double& om) {
    r = chart.radius_of({Chart::UV, u, v});
    om = 1.0 - chart.mu(r);
    return identity_detail::field_jet(field, u, v, th, r);
  };
  CurrentFamily fam;
  fam.r2Pu = [jet, mv](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    return r * r * current_Pu(om, j, mv, 0, 3.0);
  };
  fam.r2Pv = [jet, mv](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    return r * r * current_Pv(om, j, mv, 0, 3.0);
  };
  fam.Xq_psi = [jet](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    return 0.5 * (j.du + j.dv);
  };
  fam.rhs = [&chart, field, jet](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    // Q vanishes identically for a Killing multiplier
    return identity_detail::box_psi(chart, field, u, v, th, r) * 0.5 *
           (j.du + j.dv);
  };
  return fam;
}

// r-weighted multiplier X = f(u) r^gamma L with its q and m (no eta cutoff)
inline CurrentFamily rweight_family(const SchwarzschildChart& chart,
                                    const RWeightSpec& spec,
                                    const TestField& field) {
  auto jet = [&chart, field](double u, double v, double th, double& r,
                             double& om) {
    r = chart.radius_of({Chart::UV, u, v});
    om = 1.0 - chart.mu(r);
    return identity_detail::field_jet(field, u, v, th, r);
  };
  double g = spec.gamma;
  auto q_r_deriv = [&chart, g](double r) {
    double mu = chart.mu(r);
    return mu / r * std::pow(r, g - 1.0) +
           (1.0 - mu) * (g - 1.0) * std::pow(r, g - 2.0);
  };
  CurrentFamily fam;
  fam.r2Pv = [&chart, spec, jet, q_r_deriv, g](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    double f = spec.f(u);
    double q = f * om * std::pow(r, g - 1.0);
    double dvq = f * om * q_r_deriv(r);
    return r * r * (j.dv * j.dv * f * std::pow(r, g) + q * j.psi * j.dv -
                    0.5 * dvq * j.psi * j.psi);
  };
  fam.r2Pu = [&chart, spec, jet, q_r_deriv, g](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    double f = spec.f(u), fp = spec.fp(u);
    double rg = std::pow(r, g);
    double q = f * om * rg / r;
    double duq = fp * om * rg / r - f * om * q_r_deriv(r);
    double pot = (spec.k != 0) ? 2.0 / (spec.p + 1.0) *
                                     std::pow(std::abs(j.psi), spec.p + 1.0)
                               : 0.0;
    double T_uv = om * (j.ang * j.ang + pot);
    double m_u = -2.0 * om *
                 (0.5 * f * om * g * g * rg / (r * r) - fp * rg / r);
    return r * r * (T_uv * f * rg + q * j.psi * j.du -
                    0.5 * duq * j.psi * j.psi + 0.5 * m_u * j.psi * j.psi);
  };
  fam.Xq_psi = [&chart, spec, jet, g](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    return spec.f(u) * std::pow(r, g) * j.dv +
           spec.f(u) * om * std::pow(r, g - 1.0) * j.psi;
  };
  fam.rhs = [&chart, spec, field, jet, g](double u, double v, double th) {
    double r, om;
    UVJet j = jet(u, v, th, r, om);
    double f = spec.f(u);
    double Xpsi = f * std::pow(r, g) * j.dv;
    double Xqpsi = Xpsi + f * om * std::pow(r, g - 1.0) * j.psi;
    double box = identity_detail::box_psi(chart, field, u, v, th, r);
    double rhs = box * Xqpsi + rweight_Q(chart, spec, u, r, j);
    if (spec.k != 0) {
      double p = spec.p;
      double pot = std::pow(std::abs(j.psi), p + 1.0);
      double Xpot = (p + 1.0) * std::pow(std::abs(j.psi), p - 1.0) * j.psi * Xpsi;
      rhs -= (rweight_divX(chart, spec, u, r) * pot + Xpot) / (p + 1.0);
    }
    return rhs;
  };
  return fam;
}

// closed r-weighted forms vs definition-based assembly at random points;
// returns the max relative error
inline double verify_rpw_formulas(const SchwarzschildChart& chart,
                                  const RWeightSpec& spec, int npoints,
                                  std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int it = 0; it < npoints; ++it) {
    double r = rng.uniform(2.1, 50.0);
    double u = rng.uniform(-5.0, 5.0);
    UVJet j;
    j.psi = rng.uniform(-1.0, 1.0);
    j.du = rng.uniform(-1.0, 1.0);
    j.dv = rng.uniform(-1.0, 1.0);
    j.ang = rng.uniform(0.0, 1.0);
    double mu = chart.mu(r);
    double om = 1.0 - mu;
    double g = spec.gamma;
    double f = spec.f(u), fp = spec.fp(u);
    double rg = std::pow(r, g);
    // definition-based Q assembly
    double dvXv = -0.5 / om * (fp * rg - f * g * rg / r * om);
    double duX_u = f * (mu / r * rg + om * g * rg / r);
    double X_u = -2.0 * om * f * rg;
    double gsq = -j.du * j.dv / om + j.ang * j.ang;
    double tpi = j.dv * j.dv * dvXv - 0.5 * j.ang * j.ang * duX_u -
                 X_u / (2.0 * r) * (j.ang * j.ang - gsq);
    double q = f * om * rg / r;
    double mvv = 0.5 * f * om * g * g * rg / (r * r) - fp * rg / r;
    double Qdef = tpi + q * gsq + j.psi * mvv * j.dv +
                  0.5 *
                      (rweight_div_m(chart, spec, u, r) -
                       rweight_box_q(chart, spec, u, r)) *
                      j.psi * j.psi;
    double Qclosed = rweight_Q(chart, spec, u, r, j);
    double scale = std::abs(Qdef) + std::pow(r, g - 1.0);
    worst = std::max(worst, std::abs(Qclosed - Qdef) / scale);
  }
  return worst;
}

// spherically symmetric reduction: box(phi) computed covariantly by finite
// differences vs -((d_u d_v + V0)(r phi)) / ((1-mu) r)
inline IdentityReport verify_reduced_equation(const SchwarzschildChart& chart,
                                              const TestField& field, double h,
                                              int npoints, std::uint64_t seed) {
  SplitMix64 rng(seed);
  IdentityReport rep;
  auto r_of = [&](double u, double v) {
    return chart.radius_of({Chart::UV, u, v});
  };
  // r^2 d_v phi and r^2 d_u phi as analytic functions of (u,v)
  auto r2dv = [&](double u, double v) {
    double r = r_of(u, v);
    return r * r * field.dv(u, v);
  };
  auto r2du = [&](double u, double v) {
    double r = r_of(u, v);
    return r * r * field.du(u, v);
  };
  for (int it = 0; it < npoints; ++it) {
    double r0 = rng.uniform(2.3, 40.0);
    double u = rng.uniform(-3.0, 3.0);
    double v = u + chart.tortoise(r0);
    double om = 1.0 - chart.mu(r0);
    // reduced form, all analytic
    double phi = field.psi_r(u, v);
    double dudv_rphi = -(chart.mu(r0) / r0) * om * phi +
                       om * (field.du(u, v) - field.dv(u, v)) +
                       r0 * field.dudv(u, v);
    double V0 = om * 2.0 * chart.M / (r0 * r0 * r0);
    double reduced = -(dudv_rphi + V0 * r0 * phi) / (om * r0);
    for (int half = 0; half < 2; ++half) {
      double hh = half ? 0.5 * h : h;
      double cov = -(deriv4([&](double uu) { return r2dv(uu, v); }, u, hh) +
                     deriv4([&](double vv) { return r2du(u, vv); }, v, hh)) /
                   (2.0 * om * r0 * r0);
      double scale = std::abs(reduced) + std::abs(cov) + 1e-8;
      double err = std::abs(cov - reduced) / scale;
      (half ? rep.err_h2 : rep.err_h) =
          std::max(half ? rep.err_h2 : rep.err_h, err);
    }
  }
  rep.order = std::log2(rep.err_h / rep.err_h2);
  return rep;
}

}  // namespace schwave
