#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "schwave/morawetz.hpp"

using namespace schwave;

TEST_CASE("cutoff function") {
  CHECK(cutoff_f(0.0) == 0.0);
  CHECK(cutoff_f(-4.0) == -2.0);
  CHECK(cutoff_f(5.0) == 5.0);
  CHECK(cutoff_f(-1.0) == -1.0);
  double mid = cutoff_f(-2.0);
  CHECK(mid > -2.0);
  CHECK(mid < -1.0);
  CHECK(cutoff_f_deriv(-2.0) >= 0.0);

  // monotone nondecreasing across the blend, derivative matches FD
  double prev = cutoff_f(-3.5);
  for (double x = -3.4; x < -0.5; x += 0.01) {
    double cur = cutoff_f(x);
    CHECK(cur >= prev - 1e-15);
    CHECK(cutoff_f_deriv(x) ==
          Catch::Approx(deriv4([](double t) { return cutoff_f(t); }, x, 1e-4))
              .margin(1e-9));
    prev = cur;
  }
  // C^1 matching at the blend endpoints
  CHECK(cutoff_f_deriv(-3.0) == 0.0);
  CHECK(cutoff_f_deriv(-1.0) == 1.0);
  CHECK(cutoff_f(-3.0 + 1e-9) == Catch::Approx(-2.0).margin(1e-15));
  CHECK(cutoff_f(-1.0 - 1e-9) == Catch::Approx(-1.0).margin(1e-8));
}

TEST_CASE("radial profile a and its density t1") {
  SchwarzschildChart chart(1.0);
  MultiplierSpec spec;

  CHECK(a_fn(chart, spec, 3.0) == 0.0);
  CHECK(a_fn(chart, spec, 1e6) == Catch::Approx(1.0).epsilon(1e-4));
  CHECK(a_fn(chart, spec, 2.9) < 0.0);
  CHECK(a_fn(chart, spec, 3.1) > 0.0);
  CHECK_THROWS_AS(a_fn(chart, spec, 2.0), std::domain_error);

  CHECK(t1_fn(chart, spec, 3.0) == Catch::Approx(11.0 / 27.0).epsilon(1e-14));

  // closed form vs finite differences of r^2 a on [3M, 100M]
  for (int i = 0; i <= 200; ++i) {
    double r = 3.0 + 97.0 * double(i) / 200.0;
    auto r2a = [&](double x) { return x * x * a_fn(chart, spec, x); };
    double fd = (1.0 - chart.mu(r)) / (r * r) * deriv4(r2a, r, 1e-3);
    CHECK(t1_fn(chart, spec, r) == Catch::Approx(fd).epsilon(1e-8));
  }

  // positivity scan
  double mn = 1e300;
  for (int i = 0; i <= 5000; ++i) {
    double f = double(i) / 5000.0;
    double r = 2.001 * std::pow(1000.0 / 2.001, f);
    mn = std::min(mn, t1_fn(chart, spec, r));
  }
  CHECK(mn > 0.0);
}

TEST_CASE("nonlinear threshold p0") {
  CHECK(threshold_ratio(1.0, 3.0) == 0.0);
  CHECK(threshold_ratio(1.0, 1e9) < 1e-6);

  SchwarzschildChart unit(1.0);
  auto rep = threshold_p0(unit);
  CHECK(rep.p0 > 1.51);
  CHECK(rep.p0 < 1.53);
  CHECK(rep.p0 == Catch::Approx(1.5228082110).epsilon(1e-9));
  CHECK(rep.r_argmax == Catch::Approx(4.3617).epsilon(1e-3));

  // scale invariance of the threshold
  for (double M : {0.5, 2.0}) {
    SchwarzschildChart chart(M);
    auto r2 = threshold_p0(chart);
    CHECK(std::abs(r2.p0 - rep.p0) < 1e-10);
    CHECK(r2.r_argmax == Catch::Approx(M * rep.r_argmax).epsilon(1e-6));
  }
}

TEST_CASE("potential-energy coefficient") {
  SchwarzschildChart chart(1.0);
  MultiplierSpec bare;
  bare.delta = 0.0;
  bare.delta1 = 0.0;
  CHECK(potential_coefficient(chart, bare, 3.0, 3.0) ==
        Catch::Approx(11.0 / 27.0).epsilon(1e-12));
  CHECK_THROWS_AS(potential_coefficient(chart, bare, 3.0, 1.9),
                  std::domain_error);

  MultiplierSpec spec;  // defaults (1e-3, 1e-3, 1e-4)
  auto scan_radii = [](int n) {
    std::vector<double> rs;
    for (int i = 0; i <= n; ++i)
      rs.push_back(2.01 * std::pow(1000.0 / 2.01, double(i) / n));
    return rs;
  };

  // the flat-space-weighted variant stays positive for every p > 1
  for (double p : {1.1, 1.3, 1.5})
    for (double r : scan_radii(2000))
      CHECK(blue_soffer_coefficient(chart, spec, p, r) > 0.0);

  // but the plain coefficient fails below the threshold
  double worst = 1e300;
  for (int i = 0; i <= 2000; ++i) {
    double r = 3.0 + 97.0 * double(i) / 2000.0;
    worst = std::min(worst, potential_coefficient(chart, spec, 1.3, r));
  }
  CHECK(worst < 0.0);

  // above the threshold c(r) * r admits a positive lower bound
  auto p0 = threshold_p0(chart).p0;
  for (double p : {p0 + 0.05, 3.0, 5.0}) {
    double mn = 1e300;
    for (double r : scan_radii(2000))
      mn = std::min(mn, potential_coefficient(chart, spec, p, r) * r);
    CHECK(mn > 1e-3);
  }

  // continuity in (delta, delta1) at zero: |c - c_00| <= K (delta+delta1)/r
  MultiplierSpec zero = spec;
  zero.delta = 0.0;
  zero.delta1 = 0.0;
  double K = 0.0;
  for (double r : scan_radii(400)) {
    double d = std::abs(potential_coefficient(chart, spec, 3.0, r) -
                        potential_coefficient(chart, zero, 3.0, r));
    K = std::max(K, d * r / (spec.delta + spec.delta1));
  }
  CHECK(K < 50.0);
}

TEST_CASE("pointwise quadratic form report") {
  SchwarzschildChart chart(1.0);
  MultiplierSpec spec;

  CHECK_THROWS_AS(q_form_report(chart, spec, 2.5), std::domain_error);

  // with q = t1/2 the time-derivative bulk coefficient cancels exactly; the
  // delta1 q1 perturbation drives it to -delta1 q1/(1-mu), so the largest
  // admissible c away from the photon sphere is exactly -delta1/(1-mu) < 0:
  // the pointwise jet comparison against the full density fails off r = 3M.
  auto rep10 = q_form_report(chart, spec, 10.0);
  double expect10 = -spec.delta1 / (1.0 - chart.mu(10.0));
  CHECK(rep10.c_max == Catch::Approx(expect10).epsilon(1e-4));
  CHECK(rep10.q_min_eigen < 0.0);
  CHECK(rep10.q_min_eigen > -1e-5);

  // delta1 = 0 restores the exact cancellation: the report is pinned at 0
  MultiplierSpec flatq = spec;
  flatq.delta1 = 0.0;
  auto rep0 = q_form_report(chart, flatq, 10.0);
  CHECK(std::abs(rep0.c_max) < 1e-7);

  // at the photon sphere the dvt/angular coefficients of the comparison
  // density vanish together with the perturbation, and the report is
  // controlled by the radial and psi blocks only: strictly positive there
  auto rep3 = q_form_report(chart, spec, 3.0);
  CHECK(rep3.c_max > 0.0);
  CHECK(std::isfinite(rep3.c_max));

  // rescaling M -> 2M, r -> 2r: the binding time-derivative ratio
  // -delta1/(1-mu) is scale free, so the report is invariant
  SchwarzschildChart big(2.0);
  auto rep20 = q_form_report(big, spec, 20.0);
  CHECK(rep20.c_max == Catch::Approx(rep10.c_max).epsilon(1e-4));
}
