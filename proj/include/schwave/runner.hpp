/* runner.hpp
 *
 * Orchestration behind the command-line tool: evolve-and-report runs, sweep
 * grids, convergence studies, threshold/exponent/identity reports, decay
 * fits.  All outputs are deterministic for a fixed configuration: CSV bytes
 * depend only on the config (the manifest additionally records wall time).
 */
#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "csv.hpp"
#include "diagnostics.hpp"
#include "exponents.hpp"
#include "identity.hpp"
#include "svg.hpp"

namespace schwave {

inline constexpr const char* kToolVersion = "0.1.0";

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace runner_detail {

inline std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

inline void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DiskError("cannot open for writing: " + path);
  out << body;
  if (!out) throw DiskError("write failure: " + path);
}

}  // namespace runner_detail

// evolve one configuration and emit report.csv / series.csv / SVG / manifest
inline std::string run_evolve(const RunConfig& cfg, const std::string& out_dir,
                              double* max_abs_psi = nullptr) {
  namespace fs = std::filesystem;
  auto t_start = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw DiskError("cannot create run directory: " + out_dir);

  FieldGrid grid = [&] {
    try {
      return evolve(cfg.evolution);
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw NumericError(e.what());  // NaN / fixed-point abort
    }
  }();
  const EvolutionConfig& e = cfg.evolution;
  const SchwarzschildChart& chart = grid.chart();
  double p_term = e.nonlinear ? e.p : -1.0;
  if (max_abs_psi) {
    double m = 0.0;
    for (double x : grid.data()) m = std::max(m, std::abs(x));
    *max_abs_psi = m;
  }

  // report.csv: one row per (quantity, slice-parameter, value, error)
  {
    CsvWriter csv(out_dir + "/report.csv",
                  {"quantity", "slice_parameter", "value", "error_estimate"});
    for (double u : cfg.diagnostics.slice_u) {
      if (u < e.u0 || u > e.umax) continue;
      EnergyReport hu = energy_flux(grid, sample(grid, SliceKind::Hu, u),
                                    p_term);
      csv.row("energy_Hu", u, hu.energy_p, hu.err_est);
      EnergyReport su = energy_sigma_u(
          grid, u, cfg.diagnostics.split_radius * e.M, p_term);
      csv.row("energy_Sigma_u", u, su.energy_p, su.err_est);
      csv.row("rweighted_flux", u,
              rweighted_flux(grid, u, cfg.diagnostics.gamma), 0.0);
    }
    for (double vt : cfg.diagnostics.slice_vt) {
      try {
        EnergyReport st = energy_flux(
            grid, sample(grid, SliceKind::SigmaTilde, vt), p_term);
        csv.row("energy_SigmaTilde", vt, st.energy_p, st.err_est);
      } catch (const std::out_of_range&) {
        // slice outside the computed rectangle: skipped, not an error
      }
    }
    csv.close();
  }

  // series.csv: |phi|(t) at the configured measurement radii
  std::vector<std::pair<double, double>> first_series;
  {
    CsvWriter csv(out_dir + "/series.csv",
                  {"quantity", "slice_parameter", "value", "error_estimate"});
    bool first = true;
    for (double rM : cfg.diagnostics.radii) {
      double r = rM * e.M;
      double rs = chart.tortoise(r);
      std::ostringstream name;
      name << "abs_phi_r" << rM;
      double t_lo = std::max(2.0 * e.u0 + rs, 2.0 * e.v0 - rs);
      double t_hi = std::min(2.0 * e.umax + rs, 2.0 * e.vmax - rs);
      for (double t = t_lo; t <= t_hi + 1e-9; t += cfg.diagnostics.sample_dt) {
        auto j = grid.jet_at(0.5 * (t - rs), 0.5 * (t + rs));
        double val = std::abs(j.psi) / r;
        csv.row(name.str(), t, val, 0.0);
        if (first) first_series.push_back({t, val});
      }
      first = false;
    }
    csv.close();
  }
  svg_series_plot(out_dir + "/decay.svg", "|phi|(t) at fixed radius",
                  first_series, true);

  // manifest.json with config hash and file checksums
  nlohmann::json man;
  man["config"] = cfg.normalized();
  man["config_hash"] = runner_detail::hex64(cfg.hash());
  man["tool_version"] = kToolVersion;
  man["lambda_profile"] = {{"M", e.M},
                           {"transition", {2.0 * e.M, 2.5 * e.M}},
                           {"blend_amplitude", 0.2}};
  man["multiplier"] = {{"eps", cfg.multiplier.eps},
                       {"delta", cfg.multiplier.delta},
                       {"delta1", cfg.multiplier.delta1},
                       {"m_amplitude", cfg.multiplier.m_amplitude}};
  man["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  for (const char* f : {"report.csv", "series.csv", "decay.svg"}) {
    std::string path = out_dir + "/" + f;
    man["files"][f] = {
        {"fnv1a", runner_detail::hex64(fnv1a_file(path))},
        {"bytes", (std::uint64_t)fs::file_size(path)}};
  }
  runner_detail::write_text(out_dir + "/manifest.json", man.dump(2) + "\n");
  return out_dir;
}

// cartesian sweep over evolution-parameter grids; summary.csv + run dirs
inline int run_sweep(const RunConfig& cfg, const std::string& out_dir,
                     int workers = 0) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw DiskError("cannot create sweep directory: " + out_dir);
  if (workers <= 0) {
    if (const char* w = std::getenv("SCHWAVE_WORKERS")) workers = std::atoi(w);
    if (workers <= 0) workers = 1;
  }
  std::vector<std::string> keys;
  std::vector<std::vector<nlohmann::json>> values;
  std::size_t total = cfg.sweep.empty() ? 0 : 1;
  for (auto& [k, v] : cfg.sweep.items()) {
    if (!v.is_array()) throw ConfigError("sweep." + k + " must be an array");
    keys.push_back(k);
    values.push_back(std::vector<nlohmann::json>(v.begin(), v.end()));
    total *= values.back().size();
  }
  struct Row {
    std::string dir;
    nlohmann::json params;
    double max_phi = 0.0;
  };
  std::vector<Row> rows(total);
  auto worker = [&](std::size_t idx) {
    std::size_t rem = idx;
    RunConfig one = cfg;
    one.sweep = nlohmann::json::object();
    nlohmann::json params;
    nlohmann::json evo = cfg.normalized()["evolution"];
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const auto& opts = values[i];
      evo[keys[i]] = opts[rem % opts.size()];
      params[keys[i]] = opts[rem % opts.size()];
      rem /= opts.size();
    }
    nlohmann::json doc;
    doc["chart"]["M"] = cfg.evolution.M;
    doc["evolution"] = evo;
    RunConfig merged = parse_config(doc);
    one.evolution = merged.evolution;
    std::ostringstream dir;
    dir << out_dir << "/run_" << idx;
    double m = 0.0;
    run_evolve(one, dir.str(), &m);
    rows[idx] = {dir.str(), params, m};
  };
  for (std::size_t base = 0; base < total; base += std::size_t(workers)) {
    std::vector<std::thread> pool;
    for (std::size_t i = base; i < std::min(total, base + std::size_t(workers));
         ++i)
      pool.emplace_back(worker, i);
    for (auto& t : pool) t.join();
  }
  CsvWriter csv(out_dir + "/summary.csv",
                {"run_dir", "parameters", "max_abs_psi"});
  for (const auto& r : rows)
    csv.row({r.dir, r.params.dump(), csv_num(r.max_phi)});
  csv.close();
  return int(total);
}

// refinement study: halve h `levels-1` times, report pairwise orders
struct ConvergeReport {
  std::vector<double> h, max_diff, order;
};

inline ConvergeReport run_converge(const RunConfig& cfg, int levels,
                                   const std::string& out_dir) {
  if (levels < 3) throw ConfigError("converge: need at least 3 levels");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw DiskError("cannot create directory: " + out_dir);
  std::vector<FieldGrid> grids;
  ConvergeReport rep;
  for (int k = 0; k < levels; ++k) {
    EvolutionConfig e = cfg.evolution;
    e.h = cfg.evolution.h / double(1 << k);
    rep.h.push_back(e.h);
    grids.push_back(evolve(e));
  }
  for (int k = 0; k + 1 < levels; ++k) {
    const FieldGrid& c = grids[k];
    const FieldGrid& f = grids[k + 1];
    double m = 0.0;
    for (std::size_t iu = 0; iu < c.nu(); ++iu)
      for (std::size_t iv = 0; iv < c.nv(); ++iv)
        m = std::max(m, std::abs(c.psi(iu, iv) - f.psi(2 * iu, 2 * iv)));
    rep.max_diff.push_back(m);
  }
  for (std::size_t k = 0; k + 1 < rep.max_diff.size(); ++k)
    rep.order.push_back(std::log2(rep.max_diff[k] / rep.max_diff[k + 1]));
  CsvWriter csv(out_dir + "/converge.csv", {"h", "max_diff", "order"});
  for (std::size_t k = 0; k < rep.max_diff.size(); ++k)
    csv.row({csv_num(rep.h[k]), csv_num(rep.max_diff[k]),
             k < rep.order.size() ? csv_num(rep.order[k]) : std::string("")});
  csv.close();
  return rep;
}

inline nlohmann::json threshold_report_json(double M) {
  ThresholdReport rep = threshold_p0(SchwarzschildChart(M));
  return {{"M", M}, {"p0", rep.p0}, {"r_argmax", rep.r_argmax}};
}

inline nlohmann::json exponent_certificate_json(double p) {
  ExponentCertificate c = k22_solve(p);
  nlohmann::json j;
  j["p"] = c.p;
  j["branch"] = c.branch_le3 ? "interpolation (p <= 3)" : "explicit (p > 3)";
  j["feasible"] = c.feasible;
  j["slack"] = c.slack;
  if (c.feasible) {
    j["k0"] = c.k0;
    j["gamma0"] = c.gamma0;
    j["theta"] = c.theta;
    j["k"] = c.k;
    j["l"] = c.l;
    if (c.branch_le3) j["a"] = c.a;
    else j["s"] = c.s;
  }
  j["residuals"] = c.residuals;
  return j;
}

inline nlohmann::json verify_identity_json(double h, int npoints,
                                           std::uint64_t seed) {
  SchwarzschildChart chart(1.0);
  TestField f;
  f.ell = 1;
  f.uc = -0.5;
  f.vc = 6.0;
  f.wu = 2.0;
  f.wv = 4.0;
  nlohmann::json out;
  {
    MultiplierSpec spec;
    auto fam = morawetz_family(chart, spec, f, 1, 3.0);
    auto rep = verify_divergence(chart, f, fam, h, npoints, seed);
    out["morawetz"] = {{"err_h", rep.err_h},
                      {"err_h2", rep.err_h2},
                      {"order", rep.order}};
  }
  {
    RWeightSpec spec;
    spec.gamma = 1.5;
    auto fam = rweight_family(chart, spec, f);
    auto rep = verify_divergence(chart, f, fam, h, npoints, seed + 1);
    out["rweight"] = {{"err_h", rep.err_h},
                     {"err_h2", rep.err_h2},
                     {"order", rep.order}};
    out["rweight_closed_forms_max_err"] =
        verify_rpw_formulas(chart, spec, npoints, seed + 2);
  }
  out["reduced_equation_err"] =
      verify_reduced_equation(chart, f, h, npoints, seed + 3).err_h;
  return out;
}

// read a series quantity back from a run directory and fit a power law
inline nlohmann::json run_fit(const std::string& run_dir,
                              const std::string& quantity, double t1,
                              double t2) {
  std::ifstream in(run_dir + "/series.csv");
  if (!in) throw DiskError("cannot open " + run_dir + "/series.csv");
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> t, y;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string q, ts, vs, es;
    std::getline(ss, q, ',');
    std::getline(ss, ts, ',');
    std::getline(ss, vs, ',');
    std::getline(ss, es, ',');
    if (q != quantity) continue;
    t.push_back(std::strtod(ts.c_str(), nullptr));
    y.push_back(std::strtod(vs.c_str(), nullptr));
  }
  if (t.empty())
    throw ConfigError("quantity '" + quantity + "' not found in series.csv");
  DecayFit fit = [&] {
    try {
      return fit_decay(t, y, t1, t2);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  CsvWriter csv(run_dir + "/fit_" + quantity + ".csv",
                {"quantity", "window_t1", "window_t2", "exponent", "residual",
                 "sub1", "sub2", "sub3"});
  csv.row({quantity, csv_num(t1), csv_num(t2), csv_num(fit.exponent),
           csv_num(fit.residual), csv_num(fit.sub[0]), csv_num(fit.sub[1]),
           csv_num(fit.sub[2])});
  csv.close();
  std::vector<std::pair<double, double>> xy;
  for (std::size_t i = 0; i < t.size(); ++i) xy.push_back({t[i], y[i]});
  svg_series_plot(run_dir + "/fit_" + quantity + ".svg", quantity, xy, true);
  return {{"quantity", quantity},
          {"exponent", fit.exponent},
          {"residual", fit.residual},
          {"sub_windows", {fit.sub[0], fit.sub[1], fit.sub[2]}}};
}

}  // namespace schwave
