/* morawetz.hpp
 *
 * The explicit Morawetz multiplier (X, q, m) on the Schwarzschild exterior:
 *   X = X1 + delta X2,  X1 = a(r)(1-mu) dr,  X2 = b(r)(1-mu)(dr - (1-mu)^{-1} dt),
 *   a(r) = f(eps g(r)) / (r^2 eps),  g(r) = (r-3M)(r+2M) + 6M^2 ln((r-2M)/M),
 *   b = -(1-mu)^{-1} b0,   b0 = smooth decreasing cutoff, 0 beyond 3M,
 *   q = q0 + delta1 q1,  q0 = t1/2 - delta b0 / r,
 *   q1 = chi_{r > 5M/2} (r-3M)^2 / r^4,
 *   t1 = (1-mu) r^{-2} d/dr (r^2 a) = (1-mu) r^{-2} (2r - M + 6M^2/(r-2M))
 * (the last equality wherever the cutoff f acts as identity).
 *
 * The nonlinear threshold is p0 = 1 + sup_{r>=3M} 4M a / (r^2 t1), a scale-free
 * ratio maximized by coarse scan + golden-section refinement.
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "currents.hpp"
#include "geometry.hpp"
#include "numerics.hpp"

namespace schwave {

struct MultiplierSpec {
  double eps = 1e-3;
  double delta = 1e-3;
  double delta1 = 1e-4;
  // near-horizon 1-form m = m_amplitude * w(r) dr, w decreasing 1 -> 0 on
  // [2M, 3M]; disabled by default (the reference construction leaves m free
  // apart from support in r <= 3M and <m, dr> > 0 at the horizon).
  double m_amplitude = 0.0;
};

// cutoff: identity on [-1, inf), constant -2 on (-inf, -3], monotone C^2
// quartic blend in between (p(s) = -2 + 2 s^3 - s^4 on s = (x+3)/2).
inline double cutoff_f(double x) {
  if (x >= -1.0) return x;
  if (x <= -3.0) return -2.0;
  double s = 0.5 * (x + 3.0);
  return -2.0 + s * s * s * (2.0 - s);
}

inline double cutoff_f_deriv(double x) {
  if (x >= -1.0) return 1.0;
  if (x <= -3.0) return 0.0;
  double s = 0.5 * (x + 3.0);
  return 0.5 * s * s * (6.0 - 4.0 * s);
}

namespace morawetz_detail {
inline double g_arg(double M, double r) {
  return (r - 3.0 * M) * (r + 2.0 * M) +
         6.0 * M * M * std::log((r - 2.0 * M) / M);
}
inline double g_arg_deriv(double M, double r) {
  return 2.0 * r - M + 6.0 * M * M / (r - 2.0 * M);
}
}  // namespace morawetz_detail

inline double a_fn(const SchwarzschildChart& chart, const MultiplierSpec& spec,
                   double r) {
  double M = chart.M;
  if (!(r > 2.0 * M)) throw std::domain_error("a_fn: r <= 2M");
  return cutoff_f(spec.eps * morawetz_detail::g_arg(M, r)) /
         (r * r * spec.eps);
}

// t1 = (1-mu) r^{-2} d/dr(r^2 a); closed form wherever f is the identity,
// otherwise numerical differentiation of r^2 a.
inline double t1_fn(const SchwarzschildChart& chart, const MultiplierSpec& spec,
                    double r) {
  double M = chart.M;
  if (!(r > 2.0 * M)) throw std::domain_error("t1_fn: r <= 2M");
  double one_mu = 1.0 - chart.mu(r);
  if (spec.eps * morawetz_detail::g_arg(M, r) >= -1.0)
    return one_mu / (r * r) * morawetz_detail::g_arg_deriv(M, r);
  auto r2a = [&](double x) { return x * x * a_fn(chart, spec, x); };
  double h = std::min(1e-4 * M, 0.25 * (r - 2.0 * M));
  return one_mu / (r * r) * deriv4(r2a, r, h);
}

// C^3 monotone step 0 -> 1 on [0, 1]; derivative 140 t^3 (1-t)^3.  The
// extra smoothness (vs the cubic smoothstep) keeps 4th-order difference
// checks of the assembled currents clean across the cutoff junctions.
inline double step_c3(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}
inline double step_c3_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double omt = 1.0 - t;
  return 140.0 * t * t * t * omt * omt * omt;
}

// decreasing cutoff 1 -> 0 on [2M, 3M]
inline double b0_fn(const SchwarzschildChart& chart, double r) {
  return 1.0 - step_c3((r - 2.0 * chart.M) / chart.M);
}
inline double b0_fn_deriv(const SchwarzschildChart& chart, double r) {
  return -step_c3_deriv((r - 2.0 * chart.M) / chart.M) / chart.M;
}

// q1 = chi_{r > 5M/2} (r - 3M)^2 / r^4 with smooth chi rising on [5M/2, 3M]
inline double q1_fn(const SchwarzschildChart& chart, double r) {
  double M = chart.M;
  double chi = step_c3((r - 2.5 * M) / (0.5 * M));
  double d = (r - 3.0 * M);
  return chi * d * d / (r * r * r * r);
}

inline double q_fn(const SchwarzschildChart& chart, const MultiplierSpec& spec,
                   double r) {
  return 0.5 * t1_fn(chart, spec, r) - spec.delta * b0_fn(chart, r) / r +
         spec.delta1 * q1_fn(chart, r);
}

// div X = div X1 + delta div X2, div X1 = t1 + (2M/r^2) a,
// div X2 = r^{-2} d/dr(r^2 b (1-mu)) = -(2 b0 / r + b0')
inline double divX_fn(const SchwarzschildChart& chart,
                      const MultiplierSpec& spec, double r) {
  double M = chart.M;
  double div1 = t1_fn(chart, spec, r) + 2.0 * M / (r * r) * a_fn(chart, spec, r);
  double div2 = -(2.0 * b0_fn(chart, r) / r + b0_fn_deriv(chart, r));
  return div1 + spec.delta * div2;
}

// the potential-energy coefficient (p+1) q - div X; leading term
// (p-1) t1 / 2 - (2M/r^2) a
inline double potential_coefficient(const SchwarzschildChart& chart,
                                    const MultiplierSpec& spec, double p,
                                    double r) {
  if (!(r > 2.0 * chart.M))
    throw std::domain_error("potential_coefficient: r <= 2M");
  return (p + 1.0) * q_fn(chart, spec, r) - divX_fn(chart, spec, r);
}

// variant for the (1-mu)^{(p-3)/2}-weighted nonlinearity: positive for all p>1
inline double blue_soffer_coefficient(const SchwarzschildChart& chart,
                                      const MultiplierSpec& spec, double p,
                                      double r) {
  double t1 = t1_fn(chart, spec, r);
  double a = a_fn(chart, spec, r);
  return 0.5 * (p - 1.0) * t1 *
         (1.0 - 2.0 * chart.M * a / (r * r * t1));
}

struct ThresholdReport {
  double p0 = 0.0;
  double r_argmax = 0.0;
};

// ratio 4 M a / (r^2 t1) on r >= 3M, in its explicit scale-free form
inline double threshold_ratio(double M, double r) {
  if (r <= 3.0 * M) return 0.0;
  double num = 4.0 * M *
               ((r - 3.0 * M) * (r + 2.0 * M) +
                6.0 * M * M * std::log(r / M - 2.0));
  double den = r * ((2.0 * r - M) * (r - 2.0 * M) + 6.0 * M * M);
  return num / den;
}

inline ThresholdReport threshold_p0(const SchwarzschildChart& chart) {
  double M = chart.M;
  // coarse scan over 1e4 log-spaced radii in [3M, 1e6 M]
  const int n = 10000;
  double best = 0.0, rbest = 3.0 * M;
  for (int i = 0; i <= n; ++i) {
    double f = double(i) / n;
    double r = 3.0 * M * std::pow(1e6 / 3.0, f);
    double v = threshold_ratio(M, r);
    if (v > best) { best = v; rbest = r; }
  }
  double lo = rbest / std::pow(1e6 / 3.0, 1.0 / n);
  double hi = rbest * std::pow(1e6 / 3.0, 1.0 / n);
  auto [x, fx] = golden_max([&](double r) { return threshold_ratio(M, r); },
                            std::max(lo, 3.0 * M), hi, 1e-10 * M);
  return {1.0 + fx, x};
}

// --- multiplier values in double-null components for the current machinery --

// X1 = a dr* = (a/2)(dv - du); X2 = (1-mu)^{-1} b0 du
inline MultiplierValues morawetz_multiplier_values(
    const SchwarzschildChart& chart, const MultiplierSpec& spec, double r) {
  double M = chart.M;
  double one_mu = 1.0 - chart.mu(r);
  MultiplierValues mv;
  double a = a_fn(chart, spec, r);
  double b0 = b0_fn(chart, r);
  mv.Vv = 0.5 * a;
  mv.Vu = -0.5 * a + spec.delta * b0 / one_mu;
  // dV/dr
  double da = deriv_richardson([&](double x) { return a_fn(chart, spec, x); },
                               r, std::min(1e-3 * M, 0.2 * (r - 2.0 * M)));
  double db0 = b0_fn_deriv(chart, r);
  double d_one_mu = (1.0 - one_mu) / r;
  mv.dVv = 0.5 * da;
  mv.dVu = -0.5 * da +
           spec.delta * (db0 / one_mu - b0 * d_one_mu / (one_mu * one_mu));
  mv.q = q_fn(chart, spec, r);
  // q has curvature kinks where the b0 / chi cutoffs end (r = 5M/2, 3M);
  // keep FD stencils on one side of the nearest kink or the box-q term
  // picks up O(h * jump) pollution
  double kink = std::min(std::abs(r - 2.5 * M), std::abs(r - 3.0 * M));
  auto step = [&](double cap, double floor_) {
    return std::min({cap, 0.2 * (r - 2.0 * M), std::max(0.3 * kink, floor_)});
  };
  mv.dq = deriv_richardson([&](double x) { return q_fn(chart, spec, x); }, r,
                           step(1e-3 * M, 1e-6 * M));
  // m = m_amplitude w(r) dr with w = b0 profile; dr = (1-mu)(dv - du)
  double w = b0;
  mv.m_u = -spec.m_amplitude * w * one_mu;
  mv.m_v = spec.m_amplitude * w * one_mu;
  // div m - box q via radial Laplacians: box F = r^{-2} d/dr(r^2 (1-mu) F')
  double h = step(1e-2 * M, 1e-5 * M);
  auto boxq = [&](double x) {
    return x * x * (1.0 - chart.mu(x)) *
           deriv_richardson([&](double y) { return q_fn(chart, spec, y); }, x,
                            0.25 * h);
  };
  double box_q = deriv_richardson(boxq, r, h) / (r * r);
  double div_m = 0.0;
  if (spec.m_amplitude != 0.0) {
    // div of radial 1-form m = m_r dr: div m = r^{-2} d/dr(r^2 (1-mu) m_r)
    auto mr = [&](double x) {
      return x * x * (1.0 - chart.mu(x)) * spec.m_amplitude *
             b0_fn(chart, x);
    };
    div_m = deriv_richardson(mr, r, h) / (r * r);
  }
  mv.divm_minus_boxq = div_m - box_q;
  return mv;
}

// --- pointwise positivity report for Q against the Morawetz density ---------

struct QFormReport {
  double r = 0.0;
  double c_max = 0.0;        // largest c with Q - c W >= 0 pointwise
  double q_min_eigen = 0.0;  // smallest eigenvalue of the Q form itself
};

// Quadratic forms in the (vtilde, r)-chart jet (dvt psi, dr psi, |ang|, psi).
// Valid for r >= 3M where b0 = 0 and m = 0 make the multiplier explicit.
inline QFormReport q_form_report(const SchwarzschildChart& chart,
                                 const MultiplierSpec& spec, double r) {
  if (!(r >= 3.0 * chart.M))
    throw std::domain_error("q_form_report: needs r >= 3M (m unspecified below)");
  double one_mu = 1.0 - chart.mu(r);
  double lp = chart.lambda_prime(r);
  MultiplierValues mv = morawetz_multiplier_values(chart, spec, r);

  // jet conversion (dvt, dr)|_vt -> null derivatives
  auto q_of_jet = [&](double dvt, double dr, double ang, double psi) {
    UVJet j;
    j.psi = psi;
    j.ang = ang;
    j.dv = dvt * (2.0 - one_mu * lp) + one_mu * dr;
    j.du = one_mu * lp * dvt - one_mu * dr;
    return current_Q(one_mu, r, j, mv);
  };
  auto w_of_jet = [&](double dvt, double dr, double ang, double psi) {
    double d3 = 1.0 - 3.0 * chart.M / r;
    return dr * dr / (r * r) +
           d3 * d3 * (dvt * dvt / (r * r) + ang * ang / r) +
           psi * psi / (r * r * r * r);
  };

  // polarization into symmetric 4x4 matrices
  auto form_matrix = [&](auto&& f) {
    std::vector<double> m(16, 0.0);
    double diag[4];
    for (int i = 0; i < 4; ++i) {
      double e[4] = {0, 0, 0, 0};
      e[i] = 1.0;
      diag[i] = f(e[0], e[1], e[2], e[3]);
      m[i * 4 + i] = diag[i];
    }
    for (int i = 0; i < 4; ++i)
      for (int jx = i + 1; jx < 4; ++jx) {
        double e[4] = {0, 0, 0, 0};
        e[i] = 1.0; e[jx] = 1.0;
        double val = 0.5 * (f(e[0], e[1], e[2], e[3]) - diag[i] - diag[jx]);
        m[i * 4 + jx] = m[jx * 4 + i] = val;
      }
    return m;
  };
  std::vector<double> Qm = form_matrix(q_of_jet);
  std::vector<double> Wm = form_matrix(w_of_jet);

  QFormReport rep;
  rep.r = r;
  rep.q_min_eigen = symmetric_min_eigenvalue(Qm, 4);
  // bisection on c: Q - c W >= 0 (monotone since W >= 0); c may come out
  // negative -- with q = t1/2 + delta1 q1 the time-derivative diagonal of Q
  // is exactly -delta1 q1/(1-mu) while the comparison density keeps
  // (1-3M/r)^2/r^2 there, which caps c at -delta1/(1-mu) for r > 3M.
  auto psd = [&](double c) {
    std::vector<double> d(16);
    for (int i = 0; i < 16; ++i) d[i] = Qm[i] - c * Wm[i];
    // tolerance covers finite-difference noise in the structurally-zero
    // entries (the comparison weight vanishes on them at the photon sphere)
    return symmetric_min_eigenvalue(d, 4) >= -1e-11;
  };
  double lo, hi;
  if (psd(0.0)) {
    lo = 0.0;
    hi = 1.0;
    while (psd(hi) && hi < 1e6) hi *= 2.0;
  } else {
    hi = 0.0;
    lo = -1e-12;
    while (!psd(lo) && lo > -1e6) lo *= 2.0;
  }
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (psd(mid)) lo = mid; else hi = mid;
  }
  rep.c_max = lo;
  return rep;
}

}  // namespace schwave
