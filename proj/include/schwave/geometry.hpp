/* geometry.hpp
 *
 * Schwarzschild exterior charts. Carries the tortoise coordinate
 *   r* = r + 2M ln(r-2M) - 3M - 2M ln M      (so r*(3M) = 0 exactly),
 * the double-null pair u = (t-r*)/2, v = (t+r*)/2 and the horizon-regular
 * coordinate vtilde = 2v - lambda(r) with a concrete profile for lambda:
 *
 *   lambda'(r) = 1 / ((1-mu) + s(r)),   mu = 2M/r,
 *   s(r)       = (1 - mu(5M/2)) * S(clamp((5M/2 - r)/(M/2), 0, 1)),
 *
 * with S the cubic smoothstep. This gives lambda = r* for r >= 5M/2,
 * lambda'(2M) = 5 and 2 - (1-mu) lambda' in (1,2] everywhere, so the
 * vtilde level sets are uniformly spacelike down to the horizon.
 * lambda below 5M/2 is fixed by lambda(5M/2) = r*(5M/2) and quadrature,
 * cached on a dense table with Hermite interpolation (hot path).
 */
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "numerics.hpp"

namespace schwave {

enum class Chart { TRstar, UV, VtildeR };

struct SpacetimePoint {
  Chart chart;
  double c1;  // t     | u | vtilde
  double c2;  // r*    | v | r
};

class SchwarzschildChart {
 public:
  double M;       // black hole mass, geometric units
  double r0;      // excision radius, >= 2M + margin
  double R;       // far-region split radius, > 5M

  static constexpr double horizon_margin = 1e-6;  // in units of M

  explicit SchwarzschildChart(double mass = 1.0, double far_R = 6.0)
      : M(mass), r0(mass * (2.0 + horizon_margin)), R(far_R * mass) {
    if (!(M > 0.0)) throw std::domain_error("chart: M must be positive");
    if (!(R > 5.0 * M)) throw std::domain_error("chart: R must exceed 5M");
    build_lambda_table();
  }

  double mu(double r) const { return 2.0 * M / r; }

  // --- tortoise coordinate -------------------------------------------------

  double tortoise(double r) const {
    if (!(r > 2.0 * M)) throw std::domain_error("tortoise: r <= 2M");
    return r - 3.0 * M + 2.0 * M * std::log((r - 2.0 * M) / M);
  }

  double dtortoise_dr(double r) const {
    if (!(r > 2.0 * M)) throw std::domain_error("dtortoise_dr: r <= 2M");
    return 1.0 / (1.0 - mu(r));
  }

  // Inverse of the tortoise map, valid for any finite r*. Near the horizon
  // (r* very negative) the relation degenerates to
  //   r - 2M = M exp((r* - r + 3M)/(2M)),
  // solved by fixed point iteration; otherwise safeguarded Newton.
  double radius_from_tortoise(double rs) const {
    if (!std::isfinite(rs))
      throw std::domain_error("radius_from_tortoise: non-finite r*");
    if (rs < -40.0 * M) {
      double x = M * std::exp((rs + M) / (2.0 * M));
      for (int i = 0; i < 4; ++i)
        x = M * std::exp((rs + M - x) / (2.0 * M));
      return 2.0 * M + x;
    }
    double x0 = M * std::exp((rs + M) / (2.0 * M));  // near-horizon estimate
    double lo = 2.0 * M + 0.25 * std::min(x0, M);
    double hi = std::max(rs + 4.0 * M, 4.0 * M);
    while (tortoise(lo) > rs) lo = 2.0 * M + 0.5 * (lo - 2.0 * M);
    while (tortoise(hi) < rs) hi *= 2.0;
    auto f = [&](double r) { return tortoise(r) - rs; };
    auto df = [&](double r) { return dtortoise_dr(r); };
    double seed = (rs > 2.0 * M) ? rs + 3.0 * M : 2.0 * M + x0;
    if (!(seed > lo && seed < hi)) seed = 0.5 * (lo + hi);
    return newton_bracketed(f, df, seed, lo, hi);
  }

  // --- lambda profile ------------------------------------------------------

  double lambda_prime(double r) const {
    if (!(r >= 2.0 * M)) throw std::domain_error("lambda: r < 2M");
    return 1.0 / ((1.0 - mu(r)) + blend_s(r));
  }

  struct LambdaValue {
    double lambda;
    double lambda_prime;
  };

  LambdaValue lambda_eval(double r) const {
    if (!(r >= 2.0 * M)) throw std::domain_error("lambda: r < 2M");
    if (r >= 2.5 * M) return {tortoise(r), lambda_prime(r)};
    // Hermite interpolation on the cached table (exact nodal derivatives)
    double s = (r - 2.0 * M) / table_dr_;
    std::size_t i = std::min<std::size_t>(std::size_t(s), table_n_ - 2);
    double x = s - double(i);
    double h = table_dr_;
    double y0 = table_lam_[i], y1 = table_lam_[i + 1];
    double d0 = table_dlam_[i] * h, d1 = table_dlam_[i + 1] * h;
    double x2 = x * x, x3 = x2 * x;
    double lam = (2 * x3 - 3 * x2 + 1) * y0 + (x3 - 2 * x2 + x) * d0 +
                 (-2 * x3 + 3 * x2) * y1 + (x3 - x2) * d1;
    return {lam, lambda_prime(r)};
  }

  // --- chart conversions ---------------------------------------------------

  // vtilde = t + r* - lambda(r) = 2v - lambda(r)
  double vtilde_of(double t, double r) const {
    return t + tortoise(r) - lambda_eval(r).lambda;
  }

  SpacetimePoint convert(const SpacetimePoint& p, Chart target) const {
    double t, rs;  // hub chart (t, r*)
    switch (p.chart) {
      case Chart::TRstar:
        t = p.c1; rs = p.c2;
        break;
      case Chart::UV:
        t = p.c1 + p.c2; rs = p.c2 - p.c1;
        break;
      case Chart::VtildeR: {
        double r = p.c2;
        if (!(r > 2.0 * M))
          throw std::domain_error("convert: point at or inside horizon");
        rs = tortoise(r);
        t = p.c1 - rs + lambda_eval(r).lambda;
        break;
      }
      default:
        throw std::invalid_argument("convert: bad chart tag");
    }
    switch (target) {
      case Chart::TRstar: return {target, t, rs};
      case Chart::UV:     return {target, 0.5 * (t - rs), 0.5 * (t + rs)};
      case Chart::VtildeR: {
        double r = radius_from_tortoise(rs);
        return {target, t + rs - lambda_eval(r).lambda, r};
      }
    }
    throw std::invalid_argument("convert: bad target chart");
  }

  double radius_of(const SpacetimePoint& p) const {
    if (p.chart == Chart::VtildeR) return p.c2;
    double rs = (p.chart == Chart::TRstar) ? p.c2 : p.c2 - p.c1;
    return radius_from_tortoise(rs);
  }

  // --- metric coefficients in the (vtilde, r) chart ------------------------

  double g_tvtv(double r) const { return -(1.0 - mu(r)); }
  double g_tvr(double r) const {
    return 1.0 - (1.0 - mu(r)) * lambda_prime(r);
  }
  double g_rr(double r) const {
    double lp = lambda_prime(r);
    return 2.0 * lp - (1.0 - mu(r)) * lp * lp;
  }
  // inverse radial block
  double ginv_tvtv(double r) const {
    double lp = lambda_prime(r);
    return -lp * (2.0 - (1.0 - mu(r)) * lp);
  }
  double ginv_tvr(double r) const { return g_tvr(r); }
  double ginv_rr(double r) const { return 1.0 - mu(r); }

  // --- Regge-Wheeler potential (reduced 1+1 equation for psi = r phi) ------

  double rw_potential(double r, int ell) const {
    if (!(r > 2.0 * M)) throw std::domain_error("rw_potential: r <= 2M");
    if (ell < 0) throw std::domain_error("rw_potential: ell < 0");
    double one_mu = 1.0 - mu(r);
    return one_mu * (double(ell) * (ell + 1) / (r * r) +
                     2.0 * M / (r * r * r));
  }

 private:
  static constexpr std::size_t table_n_ = 4001;
  double table_dr_ = 0.0;
  std::vector<double> table_lam_, table_dlam_;

  double blend_s(double r) const {
    // amplitude 1 - mu(5M/2) = 1/5; transition on [2M, 5M/2]
    double xi = (2.5 * M - r) / (0.5 * M);
    return 0.2 * smoothstep(xi);
  }

  void build_lambda_table() {
    table_lam_.resize(table_n_);
    table_dlam_.resize(table_n_);
    table_dr_ = 0.5 * M / double(table_n_ - 1);
    // integrate lambda' downward from lambda(5M/2) = r*(5M/2)
    table_lam_[table_n_ - 1] = tortoise(2.5 * M);
    auto lp = [&](double r) { return lambda_prime(r); };
    for (std::size_t i = table_n_ - 1; i > 0; --i) {
      double rhi = 2.0 * M + double(i) * table_dr_;
      double rlo = rhi - table_dr_;
      table_lam_[i - 1] =
          table_lam_[i] - adaptive_simpson(lp, rlo, rhi, 1e-14);
    }
    for (std::size_t i = 0; i < table_n_; ++i)
      table_dlam_[i] = lambda_prime(2.0 * M + double(i) * table_dr_);
  }
};

}  // namespace schwave
