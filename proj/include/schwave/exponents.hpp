/* exponents.hpp
 *
 * Feasibility solver for the exponent systems behind the nonlinear
 * space-time integrability argument:
 *
 *  - the (k0, gamma0, a) system for |phi|^{p-1} in L^k L^l with
 *    1/k + 3/l = 2, 1 < k < 2 (interpolation branch for p <= 3, explicit
 *    s-parameterized branch for p > 3);
 *  - the second-commutator interpolation triple (q2, theta, n1) with
 *    n1 > p-2;
 *  - Strichartz admissibility 1/p1 + 3/q1 = 1/2, 6 <= q1 < infinity;
 *  - the r-weight window 0 < gamma < min(2, p-1).
 *
 * The boundary of feasibility on the first system is the root of
 * p^2 - p - 4 = 0, p = (1+sqrt(17))/2: the key inequality evaluated at the
 * limit point (k0, gamma0) = (2, p-1) has slack (p^2-p-4)/(3-p).
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace schwave {

struct ExponentCertificate {
  double p = 0.0;
  bool branch_le3 = true;  // interpolation branch (p <= 3)
  bool feasible = false;
  double k0 = 0.0, gamma0 = 0.0, a = 0.0, theta = 0.0, s = 0.0;
  double k = 0.0, l = 0.0;
  double slack = 0.0;              // key inequality slack (max found)
  std::vector<double> residuals;   // quoted relations re-evaluated
};

// a is determined by the Hoelder split a/(p+1) + (k0(p-1)-a)/2 = 1
inline double k22_a(double p, double k0) {
  return (k0 * (p - 1.0) - 2.0) * (p + 1.0) / (p - 1.0);
}

// key inequality left-hand side (must be >= 0); increasing in k0 and gamma0
inline double k22_slack(double p, double k0, double gamma0) {
  double m = k0 * (p - 1.0);
  return (gamma0 - 1.0) * (m - 2.0) / (p + 1.0 - m) - (3.0 - gamma0);
}

// side constraints of the p <= 3 construction at an interior point
inline bool k22_admissible_point(double p, double k0, double gamma0) {
  double m = k0 * (p - 1.0);
  double a = k22_a(p, k0);
  return k0 > 1.0 && k0 < 2.0 && gamma0 > 0.0 && gamma0 < p - 1.0 &&
         a > 0.0 && a < p + 1.0 && m < p + 1.0 && m > 2.0;
}

// independent dense search over (k0, gamma0); returns the best slack seen
struct GridScan {
  bool feasible = false;
  double best_slack = -1e300;
  double k0 = 0.0, gamma0 = 0.0;
};

inline GridScan k22_grid_oracle(double p, int n = 200) {
  GridScan out;
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      double k0 = 1.0 + double(i) / double(n);
      double g0 = 1.0 + (p - 2.0) * double(j) / double(n);
      if (!k22_admissible_point(p, k0, g0)) continue;
      double s = k22_slack(p, k0, g0);
      if (s > out.best_slack) {
        out.best_slack = s;
        out.k0 = k0;
        out.gamma0 = g0;
      }
      if (s >= 0.0) out.feasible = true;
    }
  return out;
}

inline ExponentCertificate k22_solve(double p) {
  if (!(p > 1.0 && p < 5.0))
    throw std::invalid_argument("k22_solve: p outside (1,5)");
  ExponentCertificate cert;
  cert.p = p;

  if (p > 3.0) {
    // explicit family: k0 = (p+1)/(p-1), tilde_p1 = 2(p-1),
    // tilde_q1 = 6(p-1)/(p-2), s in [p+1, 2(p-1)) near the top
    cert.branch_le3 = false;
    cert.k0 = (p + 1.0) / (p - 1.0);
    cert.s = (p + 1.0) + 0.9 * (p - 3.0);
    double tp1 = 2.0 * (p - 1.0);
    double tq1 = 6.0 * (p - 1.0) / (p - 2.0);
    double denom = (p - 1.0) / cert.s + 3.0 * (p - 1.0) / (p + 1.0) -
                   0.5 * (p - 1.0);
    cert.theta = 0.5 * (5.0 - p) / denom;
    double inv_k = cert.theta * (p - 1.0) / cert.s +
                   (1.0 - cert.theta) * (p - 1.0) / tp1;
    double inv_l = cert.theta * (p - 1.0) / (p + 1.0) +
                   (1.0 - cert.theta) * (p - 1.0) / tq1;
    cert.k = 1.0 / inv_k;
    cert.l = 1.0 / inv_l;
    cert.feasible = cert.theta > 0.0 && cert.theta < 1.0 && cert.k > 1.0 &&
                    cert.k < 2.0;
    cert.slack = cert.feasible ? 1.0 : -1.0;  // no inequality is active here
    cert.residuals = {
        std::abs(inv_k + 3.0 * inv_l - 2.0),
        std::abs(cert.theta * denom - 0.5 * (5.0 - p)),
    };
    return cert;
  }

  cert.branch_le3 = true;
  // the proof's limiting choices seed the search: (k0, gamma0) -> (2, p-1)
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
    double k0 = 2.0 - eps, g0 = p - 1.0 - eps;
    if (!k22_admissible_point(p, k0, g0)) continue;
    double s = k22_slack(p, k0, g0);
    if (s >= 1e-6) {
      cert.feasible = true;
      cert.k0 = k0;
      cert.gamma0 = g0;
      cert.slack = s;
      break;
    }
  }
  if (!cert.feasible) {
    // maximal slack is attained at the (excluded) corner (2, p-1)
    cert.k0 = 2.0;
    cert.gamma0 = p - 1.0;
    cert.slack = (p * p - p - 4.0) / (3.0 - p);
    cert.residuals = {std::max(0.0, -cert.slack)};
    return cert;
  }
  cert.a = k22_a(p, cert.k0);
  cert.theta = (5.0 - p) / (8.0 / cert.k0 - p + 1.0);
  double inv_k = 0.5 + (1.0 / cert.k0 - 0.5) * cert.theta;
  cert.k = 1.0 / inv_k;
  cert.l = 3.0 / (2.0 - inv_k);
  double tp1 = 2.0 * (p - 1.0);
  double tq1 = 6.0 * (p - 1.0) / (p - 2.0);
  cert.residuals = {
      // Hoelder split
      std::abs(cert.a / (p + 1.0) +
               (cert.k0 * (p - 1.0) - cert.a) / 2.0 - 1.0),
      // theta relation
      std::abs((4.0 / cert.k0 - 0.5 * (p - 1.0)) * cert.theta -
               0.5 * (5.0 - p)),
      // scaling line through the interpolated pair
      std::abs(inv_k + 3.0 / cert.l - 2.0),
      // interpolation against the admissible pair (tilde_p1, tilde_q1)
      std::abs(inv_k - (cert.theta / cert.k0 +
                        (1.0 - cert.theta) * (p - 1.0) / tp1)),
      std::abs(1.0 / cert.l - (cert.theta / cert.k0 +
                               (1.0 - cert.theta) * (p - 1.0) / tq1)),
  };
  return cert;
}

// second-commutator interpolation triple
struct Z2PhiExponents {
  double q2 = 0.0, p2 = 0.0, theta = 0.0, n1 = 0.0;
};

inline Z2PhiExponents z2phi_exponents(double p, double k0) {
  if (!(p > 2.5))
    throw std::invalid_argument("z2phi_exponents: requires p > 5/2");
  if (!(k0 > 1.0 && k0 < 2.0))
    throw std::invalid_argument("z2phi_exponents: k0 outside (1,2)");
  Z2PhiExponents out;
  // branch rules: q2 just above 6(p-2) for p >= 3, just above 6 otherwise
  out.q2 = 1.01 * std::max(6.0, 6.0 * (p - 2.0));
  double m = k0 * (p - 1.0);
  out.theta = (1.0 / (6.0 * (p - 2.0)) - 1.0 / m) / (1.0 / out.q2 - 1.0 / m);
  out.p2 = 1.0 / (0.5 - 3.0 / out.q2);
  out.n1 = 1.0 / (out.theta / out.p2 + (1.0 - out.theta) / m);
  if (!(out.theta > 0.0 && out.theta < 1.0))
    throw std::runtime_error("z2phi_exponents: interpolation weight not in "
                             "(0,1); residual " + std::to_string(out.theta));
  if (!(out.n1 > p - 2.0))
    throw std::runtime_error("z2phi_exponents: n1 <= p-2; residual " +
                             std::to_string(out.n1 - (p - 2.0)));
  return out;
}

inline bool admissible_check(double p1, double q1) {
  if (!(std::isfinite(q1) && q1 >= 6.0)) return false;
  return std::abs(1.0 / p1 + 3.0 / q1 - 0.5) <= 1e-12;
}

inline std::pair<double, double> gamma_window(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("gamma_window: p <= 1");
  return {0.0, std::min(2.0, p - 1.0)};
}

}  // namespace schwave
