/* schwave.cpp
 *
 * Command-line front end: evolve runs, parameter sweeps, convergence
 * studies, the Morawetz threshold, exponent certificates, divergence
 * identity verification, and decay fits.
 *
 * Exit codes: 0 success, 2 config/schema violation, 3 disk failure,
 * 4 numeric abort (NaN / fixed-point stall), 1 anything else.  Errors are
 * reported as one JSON object on stdout.
 */
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "schwave/runner.hpp"

namespace {

int fail(int code, const std::string& kind, const std::string& what) {
  nlohmann::json j = {{"error", {{"kind", kind}, {"message", what}}},
                      {"exit_code", code}};
  std::cout << j.dump(2) << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace schwave;
  CLI::App app{"numerical laboratory for defocusing semilinear waves on the "
               "Schwarzschild exterior"};
  app.require_subcommand(1);

  std::string config_path, out_dir, run_dir, quantity;
  double M = 1.0, p = 3.0, t1 = 200.0, t2 = 2000.0, h = 1e-3;
  int levels = 3, workers = 0, npoints = 25;

  auto* c_evolve = app.add_subcommand("evolve", "run one configuration");
  c_evolve->add_option("--config", config_path, "JSON config")->required();
  c_evolve->add_option("--out", out_dir, "output directory override");

  auto* c_sweep = app.add_subcommand("sweep", "run a parameter grid");
  c_sweep->add_option("--config", config_path, "JSON config")->required();
  c_sweep->add_option("--out", out_dir, "output directory override");
  c_sweep->add_option("--workers", workers, "worker cap (or SCHWAVE_WORKERS)");

  auto* c_conv = app.add_subcommand("converge", "refinement study");
  c_conv->add_option("--config", config_path, "JSON config")->required();
  c_conv->add_option("--levels", levels, "number of h-halvings + 1");
  c_conv->add_option("--out", out_dir, "output directory override");

  auto* c_thr = app.add_subcommand("morawetz-threshold",
                                   "threshold exponent p0");
  c_thr->add_option("--M", M, "black hole mass");

  auto* c_exp = app.add_subcommand("exponents", "exponent certificate");
  c_exp->add_option("--p", p, "nonlinearity power")->required();

  auto* c_vid = app.add_subcommand("verify-identity",
                                   "divergence identity check");
  c_vid->add_option("--step", h, "finite-difference step");
  c_vid->add_option("--points", npoints, "sample points");

  auto* c_fit = app.add_subcommand("fit", "power-law fit of a series");
  c_fit->add_option("--run", run_dir, "run directory")->required();
  c_fit->add_option("--quantity", quantity, "series name")->required();
  c_fit->add_option("--t1", t1, "window start");
  c_fit->add_option("--t2", t2, "window end");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_evolve) {
      RunConfig cfg = load_config(config_path);
      std::string dir = out_dir.empty() ? cfg.output : out_dir;
      run_evolve(cfg, dir);
      std::cout << nlohmann::json{{"run_dir", dir}}.dump(2) << std::endl;
    } else if (*c_sweep) {
      RunConfig cfg = load_config(config_path);
      std::string dir = out_dir.empty() ? cfg.output : out_dir;
      int n = run_sweep(cfg, dir, workers);
      std::cout << nlohmann::json{{"sweep_dir", dir}, {"runs", n}}.dump(2)
                << std::endl;
    } else if (*c_conv) {
      RunConfig cfg = load_config(config_path);
      std::string dir = out_dir.empty() ? cfg.output : out_dir;
      ConvergeReport rep = run_converge(cfg, levels, dir);
      std::cout << nlohmann::json{{"h", rep.h},
                                  {"max_diff", rep.max_diff},
                                  {"order", rep.order}}
                       .dump(2)
                << std::endl;
    } else if (*c_thr) {
      std::cout << threshold_report_json(M).dump(2) << std::endl;
    } else if (*c_exp) {
      std::cout << exponent_certificate_json(p).dump(2) << std::endl;
    } else if (*c_vid) {
      std::cout << verify_identity_json(h, npoints, 424242ull).dump(2)
                << std::endl;
    } else if (*c_fit) {
      std::cout << run_fit(run_dir, quantity, t1, t2).dump(2) << std::endl;
    }
  } catch (const ConfigError& e) {
    return fail(2, "config", e.what());
  } catch (const DiskError& e) {
    return fail(3, "disk", e.what());
  } catch (const NumericError& e) {
    return fail(4, "numeric", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, "config", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
  return 0;
}
