/* rweight.hpp
 *
 * Closed-form r-weighted currents for the multiplier
 *   X = f(u) r^gamma L,   q = f(u)(1-mu) r^{gamma-1},
 *   m = (1/2 f(1-mu)gamma^2 r^{gamma-2} - f' r^{gamma-1}) L   (as a vector),
 * together with the radial cutoff eta (0 for r <= 4M, 1 for r >= 5M) used in
 * the weighted energy inequality, the positivity radius R(gamma), and the
 * exact potential-energy coefficient q - div X/(p+1).
 *
 * All mu-dependent coefficients are kept exactly; the O(mu) grouping is used
 * only to locate the radius beyond which the assembled coefficients are
 * positive.
 */
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "currents.hpp"
#include "geometry.hpp"

namespace schwave {

struct RWeightSpec {
  double gamma = 1.0;  // weight exponent, in (0,2)
  int k = 0;           // defocusing potential flag
  double p = 3.0;      // nonlinearity power (used when k = 1)
  std::function<double(double)> f = [](double) { return 1.0; };
  std::function<double(double)> fp = [](double) { return 0.0; };
};

// increasing cutoff: 0 for r <= 4M, 1 for r >= 5M
inline double rweight_eta(const SchwarzschildChart& chart, double r) {
  return smoothstep((r - 4.0 * chart.M) / chart.M);
}
inline double rweight_eta_deriv(const SchwarzschildChart& chart, double r) {
  double x = (r - 4.0 * chart.M) / chart.M;
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return (6.0 * x - 6.0 * x * x) / chart.M;
}

// psi^2 coefficient of Q over (f r^{gamma-3}/2): equals gamma (1-gamma/2)^2
// in the flat limit
inline double rweight_A(double gamma, double mu) {
  double om = 1.0 - mu;
  return 0.5 * gamma * gamma * om * (gamma - gamma * mu + 2.0 * mu) -
         gamma * (gamma - 1.0) - mu * (gamma - 1.0) * (3.0 - 2.0 * gamma) -
         mu * mu * (gamma - 2.0) * (gamma - 2.0) -
         0.25 * gamma * gamma * gamma * om * om;
}

// div m and box q, needed by the definition-based assembly of Q
inline double rweight_div_m(const SchwarzschildChart& chart,
                            const RWeightSpec& s, double u, double r) {
  double mu = chart.mu(r);
  double g = s.gamma;
  return 0.5 * g * g * s.f(u) * std::pow(r, g - 3.0) * (1.0 - mu) *
             (g - g * mu + 2.0 * mu) +
         s.fp(u) * std::pow(r, g - 2.0) * (mu * g - 1.0 - g);
}

inline double rweight_box_q(const SchwarzschildChart& chart,
                            const RWeightSpec& s, double u, double r) {
  double mu = chart.mu(r);
  double g = s.gamma;
  return -s.fp(u) * std::pow(r, g - 2.0) * (mu * (1.0 - g) + g) +
         s.f(u) * std::pow(r, g - 3.0) *
             ((g - 1.0) * g + mu * (g - 1.0) * (3.0 - 2.0 * g) +
              mu * mu * (g - 2.0) * (g - 2.0));
}

// bulk density Q[psi, X, q, m]
inline double rweight_Q(const SchwarzschildChart& chart, const RWeightSpec& s,
                        double u, double r, const UVJet& j) {
  if (!(r > 2.0 * chart.M)) throw std::domain_error("rweight_Q: r <= 2M");
  double mu = chart.mu(r);
  double om = 1.0 - mu;
  double g = s.gamma;
  double f = s.f(u), fp = s.fp(u);
  double sq = r * j.dv + 0.5 * g * om * j.psi;
  double Lrpsi = r * j.dv + om * j.psi;
  return 0.5 * f * g * std::pow(r, g - 3.0) * sq * sq +
         0.5 * f * (2.0 - g + mu * (g - 3.0)) * std::pow(r, g - 1.0) * j.ang *
             j.ang -
         0.5 * fp / om * std::pow(r, g - 2.0) * Lrpsi * Lrpsi +
         0.5 * f * rweight_A(g, mu) * std::pow(r, g - 3.0) * j.psi * j.psi;
}

// r^2 P_v and r^2 P_u for the eta-cut current (total-derivative bookkeeping
// written out against the jet)
inline double rweight_r2Pv(const SchwarzschildChart& chart, const RWeightSpec& s,
                           double u, double r, const UVJet& j) {
  if (!(r > 2.0 * chart.M)) throw std::domain_error("rweight_r2Pv: r <= 2M");
  double mu = chart.mu(r);
  double om = 1.0 - mu;
  double g = s.gamma;
  double f = s.f(u);
  double eta = rweight_eta(chart, r);
  double Lrpsi = r * j.dv + om * j.psi;
  // L(eta f (1-mu) r^{g+1} psi^2) with L r = 1-mu
  double C = eta * om * std::pow(r, g + 1.0);
  double dC = rweight_eta_deriv(chart, r) * om * std::pow(r, g + 1.0) +
              eta * (mu / r) * std::pow(r, g + 1.0) +
              eta * om * (g + 1.0) * std::pow(r, g);
  double total_deriv = f * (dC * om * j.psi * j.psi + 2.0 * C * j.psi * j.dv);
  return eta * f * std::pow(r, g) * Lrpsi * Lrpsi - 0.5 * total_deriv;
}

inline double rweight_r2Pu(const SchwarzschildChart& chart, const RWeightSpec& s,
                           double u, double r, const UVJet& j) {
  if (!(r > 2.0 * chart.M)) throw std::domain_error("rweight_r2Pu: r <= 2M");
  double mu = chart.mu(r);
  double om = 1.0 - mu;
  double g = s.gamma;
  double f = s.f(u), fp = s.fp(u);
  double eta = rweight_eta(chart, r);
  double pot = (s.k != 0)
                   ? 2.0 * r * r / (s.p + 1.0) *
                         std::pow(std::abs(j.psi), s.p + 1.0)
                   : 0.0;
  double main = eta * f * om * std::pow(r, g) *
                (r * r * j.ang * j.ang + pot +
                 (om * (1.0 - 0.5 * g) * g + mu) * j.psi * j.psi);
  // Lbar(eta f (1-mu) r^{g+1} psi^2) with Lbar r = -(1-mu), Lbar f = f'
  double C = eta * om * std::pow(r, g + 1.0);
  double dC = rweight_eta_deriv(chart, r) * om * std::pow(r, g + 1.0) +
              eta * (mu / r) * std::pow(r, g + 1.0) +
              eta * om * (g + 1.0) * std::pow(r, g);
  double total_deriv = fp * C * j.psi * j.psi +
                       f * (-dC * om * j.psi * j.psi + 2.0 * C * j.psi * j.du);
  return main + 0.5 * total_deriv +
         rweight_eta_deriv(chart, r) * f * om * om * std::pow(r, g + 1.0) *
             j.psi * j.psi;
}

// exact potential-energy coefficient q - div X / (p+1)
inline double rweight_coefficient(const SchwarzschildChart& chart,
                                  const RWeightSpec& s, double u, double r) {
  double mu = chart.mu(r);
  return s.f(u) * std::pow(r, s.gamma - 1.0) *
         ((s.p - 1.0 - s.gamma) * (1.0 - mu) - mu) / (s.p + 1.0);
}

inline double rweight_divX(const SchwarzschildChart& chart, const RWeightSpec& s,
                           double u, double r) {
  double mu = chart.mu(r);
  return s.f(u) * std::pow(r, s.gamma - 1.0) *
         (mu + (1.0 - mu) * (s.gamma + 2.0));
}

// minimal radius beyond which both assembled Q coefficients
// (angular: 2-gamma+mu(gamma-3), psi^2: A(gamma,mu)) are positive
inline double positivity_radius(const SchwarzschildChart& chart, double gamma) {
  if (!(gamma > 0.0 && gamma < 2.0))
    throw std::domain_error("positivity_radius: gamma outside (0,2)");
  auto cond = [&](double mu) {
    return std::min(2.0 - gamma + mu * (gamma - 3.0), rweight_A(gamma, mu));
  };
  if (cond(1.0) > 0.0) return 2.0 * chart.M;
  // both coefficients are positive at mu = 0 and fail by mu = 1;
  // locate the first failure in mu by bisection
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (cond(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 2.0 * chart.M / lo;
}

// run radius: R = max(5M, positivity radius)
inline double rweight_run_radius(const SchwarzschildChart& chart, double gamma) {
  return std::max(5.0 * chart.M, positivity_radius(chart, gamma));
}

}  // namespace schwave
