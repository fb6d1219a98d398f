#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "schwave/diagnostics.hpp"
#include "schwave/evolve.hpp"

using namespace schwave;

namespace {

EvolutionConfig small_cfg() {
  EvolutionConfig cfg;
  cfg.u0 = 0.0;
  cfg.umax = 20.0;
  cfg.v0 = 0.0;
  cfg.vmax = 60.0;
  cfg.h = 0.25;
  return cfg;
}

}  // namespace

TEST_CASE("initial data: compact outgoing pulse") {
  EvolutionConfig cfg = small_cfg();

  // A = 0 gives the zero grid
  cfg.amplitude = 0.0;
  FieldGrid zero = evolve(cfg);
  for (double x : zero.data()) CHECK(x == 0.0);

  // bump vanishes to high order at xi = +-1
  cfg.amplitude = 1.0;
  CHECK(initial_pulse(cfg, cfg.center - cfg.width) == 0.0);
  CHECK(initial_pulse(cfg, cfg.center + cfg.width) == 0.0);
  double eps = 1e-4;
  CHECK(std::abs(initial_pulse(cfg, cfg.center + cfg.width - eps)) < 1e-14);
  CHECK(std::abs(initial_pulse(cfg, cfg.center - cfg.width + eps)) < 1e-14);
  CHECK(initial_pulse(cfg, cfg.center) == cfg.amplitude);

  // support violations are config errors
  EvolutionConfig bad = cfg;
  bad.center = 58.0;  // support sticks out of the v-range
  CHECK_THROWS_AS(evolve(bad), std::invalid_argument);
  bad = cfg;
  bad.p = 5.0;
  CHECK_THROWS_AS(FieldGrid(bad), std::invalid_argument);
  bad = cfg;
  bad.ell = 1;  // nonlinear runs are spherically symmetric
  CHECK_THROWS_AS(FieldGrid(bad), std::invalid_argument);
}

TEST_CASE("diamond update: flat d'Alembert is exact") {
  EvolutionConfig cfg = small_cfg();
  cfg.nonlinear = false;
  cfg.potential = false;
  SchwarzschildChart chart(cfg.M);
  SplitMix64 rng(90001ull);
  for (int i = 0; i < 200; ++i) {
    double S = rng.uniform(-2.0, 2.0), W = rng.uniform(-2.0, 2.0),
           E = rng.uniform(-2.0, 2.0);
    double r = rng.uniform(2.1, 60.0);
    double got = step_diamond(cfg, chart, S, W, E, r, 1.0, 2.0);
    CHECK(got == (E + W) - S);
  }

  // zero right-hand side propagates the outgoing profile along u
  FieldGrid grid = evolve(cfg);
  for (std::size_t iu = 0; iu < grid.nu(); iu += 7)
    for (std::size_t iv = 0; iv < grid.nv(); iv += 11)
      CHECK(grid.psi(iu, iv) ==
            Catch::Approx(grid.psi(0, iv)).margin(1e-12));
}

TEST_CASE("determinism and causal support") {
  EvolutionConfig cfg = small_cfg();
  FieldGrid a = evolve(cfg);
  FieldGrid b = evolve(cfg);
  REQUIRE(a.data().size() == b.data().size());
  CHECK(a.data() == b.data());  // bit-identical

  // support: the region v < c - w is untouched by the pulse
  std::size_t iv_cut = std::size_t((cfg.center - cfg.width) / cfg.h);
  for (std::size_t iu = 0; iu < a.nu(); ++iu)
    for (std::size_t iv = 0; iv < iv_cut; ++iv)
      CHECK(a.psi(iu, iv) == 0.0);

  // causality: perturbing data at v >= v_cut never changes values at v < v_cut
  double v_cut = 40.0;
  FieldGrid c(cfg);
  initial_data(c);
  for (std::size_t iv = 0; iv < c.nv(); ++iv)
    if (c.v_of(iv) >= v_cut) c.psi(0, iv) += 0.3;
  propagate(c);
  std::size_t ivc = std::size_t(v_cut / cfg.h);
  for (std::size_t iu = 0; iu < a.nu(); iu += 3)
    for (std::size_t iv = 0; iv < ivc; ++iv)
      CHECK(c.psi(iu, iv) == a.psi(iu, iv));
}

TEST_CASE("grid refinement: second-order convergence") {
  EvolutionConfig cfg = small_cfg();
  cfg.umax = 10.0;
  cfg.vmax = 45.0;
  double hs[3] = {0.5, 0.25, 0.125};
  FieldGrid g0 = [&] { EvolutionConfig c = cfg; c.h = hs[0]; return evolve(c); }();
  FieldGrid g1 = [&] { EvolutionConfig c = cfg; c.h = hs[1]; return evolve(c); }();
  FieldGrid g2 = [&] { EvolutionConfig c = cfg; c.h = hs[2]; return evolve(c); }();
  auto diff = [&](const FieldGrid& coarse, const FieldGrid& fine, int fac) {
    double m = 0.0;
    for (std::size_t iu = 0; iu < coarse.nu(); ++iu)
      for (std::size_t iv = 0; iv < coarse.nv(); ++iv)
        m = std::max(m, std::abs(coarse.psi(iu, iv) -
                                 fine.psi(iu * fac, iv * fac)));
    return m;
  };
  double e0 = diff(g0, g1, 2);
  double e1 = diff(g1, g2, 2);
  double ratio = e0 / e1;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("slice sampling") {
  EvolutionConfig cfg = small_cfg();
  FieldGrid grid = evolve(cfg);
  const SchwarzschildChart& chart = grid.chart();

  // H_u along a grid line returns grid values exactly
  SliceTrace hu = sample(grid, SliceKind::Hu, 5.0);
  std::size_t iu = std::size_t(5.0 / cfg.h);
  for (std::size_t iv = 0; iv < grid.nv(); ++iv)
    CHECK(hu.psi[iv] == grid.psi(iu, iv));

  // vtilde slice coincides with t = const where lambda = r*
  SliceTrace st = sample(grid, SliceKind::SigmaTilde, 30.0);
  REQUIRE(st.coord.size() > 10);
  for (std::size_t i = 0; i < st.coord.size(); ++i) {
    double rs = chart.tortoise(st.r[i]);
    double v = 0.5 * (st.level + chart.lambda_eval(st.r[i]).lambda);
    double t = (v - rs) + v;  // u + v
    if (st.r[i] >= 2.5 * cfg.M)
      CHECK(t == Catch::Approx(st.level).margin(1e-10));
    else
      CHECK(st.r[i] >= 2.05 * cfg.M);
  }

  // out-of-domain slices raise descriptive errors
  CHECK_THROWS_AS(sample(grid, SliceKind::Hu, 25.0), std::out_of_range);
  CHECK_THROWS_AS(sample(grid, SliceKind::Hvbar, -1.0), std::out_of_range);
  CHECK_THROWS_AS(sample(grid, SliceKind::SigmaTilde, 1e5), std::out_of_range);
  CHECK_THROWS_AS(grid.jet_at(-1.0, 5.0), std::out_of_range);
}

TEST_CASE("golden initial-slice energy") {
  // independent high-order quadrature of the initial data gives, for
  // (A, c, w, M, p) = (1, 20, 5, 1, 3) on the first outgoing cone:
  //   E[phi]   = 7.4496444763841472
  //   E[phi,p] = 7.7170999299000792
  EvolutionConfig cfg;
  cfg.h = 0.05;
  cfg.u0 = 0.0;
  cfg.umax = 1.0;
  cfg.v0 = 0.0;
  cfg.vmax = 40.0;
  FieldGrid grid = evolve(cfg);
  EnergyReport rep = energy_flux(grid, sample(grid, SliceKind::Hu, 0.0), 3.0);
  CHECK(rep.energy == Catch::Approx(7.4496444763841472).epsilon(1e-4));
  CHECK(rep.energy_p == Catch::Approx(7.7170999299000792).epsilon(1e-4));
  CHECK(rep.err_est < 1e-2);
}

TEST_CASE("amplitude sweep completes without blowup") {
  for (double A : {0.1, 1.0, 10.0}) {
    EvolutionConfig cfg = small_cfg();
    cfg.amplitude = A;
    FieldGrid grid = evolve(cfg);
    double m = 0.0;
    for (double x : grid.data()) m = std::max(m, std::abs(x));
    CHECK(std::isfinite(m));
    CHECK(m <= 2.0 * A);  // defocusing: no growth beyond the data
  }
}

TEST_CASE("linear mode conserves the t-energy at second order") {
  // reduced t-energy integral  int (1/2 (L psi)^2 + 1/2 (Lbar psi)^2
  //                                 + V psi^2) dr*
  auto t_energy = [](const FieldGrid& grid, double t, double rs_lo,
                     double rs_hi) {
    const EvolutionConfig& cfg = grid.config();
    const SchwarzschildChart& chart = grid.chart();
    std::vector<double> xs, ys;
    for (double rs = rs_lo; rs <= rs_hi + 1e-9; rs += cfg.h) {
      double u = 0.5 * (t - rs), v = 0.5 * (t + rs);
      auto j = grid.jet_at(u, v);
      double r = chart.radius_from_tortoise(rs);
      double om = 1.0 - chart.mu(r);
      double V = om * (double(cfg.ell * (cfg.ell + 1)) / (r * r) +
                       2.0 * cfg.M / (r * r * r));
      xs.push_back(rs);
      ys.push_back(0.5 * j.Lpsi * j.Lpsi + 0.5 * j.Lbpsi * j.Lbpsi +
                   V * j.psi * j.psi);
    }
    return trapezoid_nonuniform(xs, ys);
  };

  auto drift = [&](double h) {
    EvolutionConfig cfg;
    cfg.nonlinear = false;
    cfg.ell = 2;
    cfg.center = 30.0;
    cfg.width = 5.0;
    cfg.h = h;
    cfg.u0 = 0.0;
    cfg.umax = 30.0;
    cfg.v0 = 0.0;
    cfg.vmax = 60.0;
    FieldGrid grid = evolve(cfg);
    double e1 = t_energy(grid, 40.0, -19.0, 39.0);
    double e2 = t_energy(grid, 46.0, -13.0, 45.0);
    return std::abs(e2 - e1) / e1;
  };
  double d1 = drift(0.25);
  double d2 = drift(0.125);
  CHECK(d1 < 5e-3);
  CHECK(d2 < d1);
}

TEST_CASE("nonlinear run: slice energy is non-increasing") {
  // measured after the pulse crosses the near-horizon band: while it falls
  // in, the (1-mu)-weighted norm legitimately rises even though the Killing
  // flux does not, so the foliation starts once the transient has passed
  EvolutionConfig cfg = small_cfg();
  cfg.umax = 50.0;
  cfg.vmax = 120.0;
  FieldGrid grid = evolve(cfg);
  double prev = 1e300;
  for (double vt : {60.0, 70.0, 80.0, 90.0}) {
    EnergyReport rep =
        energy_flux(grid, sample(grid, SliceKind::SigmaTilde, vt), cfg.p);
    CHECK(rep.energy_p <= prev * (1.0 + 1e-3));
    prev = rep.energy_p;
  }
}

TEST_CASE("linear ell = 0 tail exponent at r = 10M") {
  EvolutionConfig cfg;
  cfg.nonlinear = false;
  cfg.ell = 0;
  cfg.h = 0.25;
  cfg.u0 = 0.0;
  cfg.umax = 400.0;
  cfg.v0 = 0.0;
  cfg.vmax = 440.0;
  FieldGrid grid = evolve(cfg);
  double rs10 = grid.chart().tortoise(10.0);
  std::vector<double> ts, ys;
  for (double t = 400.0; t <= 780.0; t += 4.0) {
    auto j = grid.jet_at(0.5 * (t - rs10), 0.5 * (t + rs10));
    ts.push_back(t);
    ys.push_back(std::abs(j.psi) / 10.0);
  }
  // the local slope creeps down toward 3 (logarithmic corrections); the
  // late window sits inside the +-0.3 sanity band
  DecayFit fit = fit_decay(ts, ys, 450.0, 780.0);
  CHECK(fit.exponent == Catch::Approx(3.0).margin(0.3));
}
