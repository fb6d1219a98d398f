/* config.hpp
 *
 * Run configuration: a single JSON document covering chart, evolution,
 * multiplier tunables, diagnostics, and output directory.  Schema-validated
 * (unknown keys rejected); defaults are materialized into the normalized
 * form whose FNV-1a hash identifies the run.
 */
#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "evolve.hpp"
#include "morawetz.hpp"
#include "numerics.hpp"

namespace schwave {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DiagnosticsSpecCfg {
  std::vector<double> slice_u = {50.0, 100.0, 200.0};
  std::vector<double> slice_vt = {100.0, 200.0, 400.0};
  double gamma = 1.5;
  std::vector<double> radii = {2.05, 2.2, 3.0, 5.0, 10.0};  // units of M
  double fit_t1 = 200.0, fit_t2 = 2000.0;
  double sample_dt = 2.0;
  double split_radius = 5.0;  // composite-slice junction, units of M
};

struct RunConfig {
  EvolutionConfig evolution;
  MultiplierSpec multiplier;
  DiagnosticsSpecCfg diagnostics;
  std::string output = "run";
  nlohmann::json sweep = nlohmann::json::object();

  nlohmann::json normalized() const {
    nlohmann::json j;
    j["output"] = output;
    j["chart"]["M"] = evolution.M;
    auto& e = j["evolution"];
    e["p"] = evolution.p;
    e["amplitude"] = evolution.amplitude;
    e["center"] = evolution.center;
    e["width"] = evolution.width;
    e["h"] = evolution.h;
    e["u0"] = evolution.u0;
    e["umax"] = evolution.umax;
    e["v0"] = evolution.v0;
    e["vmax"] = evolution.vmax;
    e["nonlinear"] = evolution.nonlinear;
    e["potential"] = evolution.potential;
    e["ell"] = evolution.ell;
    auto& m = j["multiplier"];
    m["eps"] = multiplier.eps;
    m["delta"] = multiplier.delta;
    m["delta1"] = multiplier.delta1;
    m["m_amplitude"] = multiplier.m_amplitude;
    auto& d = j["diagnostics"];
    d["slice_u"] = diagnostics.slice_u;
    d["slice_vt"] = diagnostics.slice_vt;
    d["gamma"] = diagnostics.gamma;
    d["radii"] = diagnostics.radii;
    d["fit_window"] = {diagnostics.fit_t1, diagnostics.fit_t2};
    d["sample_dt"] = diagnostics.sample_dt;
    d["split_radius"] = diagnostics.split_radius;
    if (!sweep.empty()) j["sweep"] = sweep;
    return j;  // nlohmann::json orders keys; dump() is deterministic
  }

  std::uint64_t hash() const { return fnv1a64(normalized().dump()); }
};

namespace config_detail {

inline void reject_unknown(const nlohmann::json& j,
                           const std::set<std::string>& allowed,
                           const std::string& where) {
  if (!j.is_object())
    throw ConfigError("config section '" + where + "' must be an object");
  for (auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' in config section '" +
                        where + "'");
}

template <class T>
void get_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(std::string("bad value type for key '") + key + "'");
    }
  }
}

}  // namespace config_detail

inline RunConfig parse_config(const nlohmann::json& j) {
  using config_detail::get_if;
  using config_detail::reject_unknown;
  RunConfig cfg;
  reject_unknown(j, {"output", "chart", "evolution", "multiplier",
                     "diagnostics", "sweep"},
                 "(root)");
  get_if(j, "output", cfg.output);
  if (j.contains("chart")) {
    reject_unknown(j["chart"], {"M"}, "chart");
    get_if(j["chart"], "M", cfg.evolution.M);
    if (!(cfg.evolution.M > 0.0)) throw ConfigError("chart.M must be > 0");
  }
  if (j.contains("evolution")) {
    const auto& e = j["evolution"];
    reject_unknown(e,
                   {"p", "amplitude", "center", "width", "h", "u0", "umax",
                    "v0", "vmax", "nonlinear", "potential", "ell"},
                   "evolution");
    get_if(e, "p", cfg.evolution.p);
    get_if(e, "amplitude", cfg.evolution.amplitude);
    get_if(e, "center", cfg.evolution.center);
    get_if(e, "width", cfg.evolution.width);
    get_if(e, "h", cfg.evolution.h);
    get_if(e, "u0", cfg.evolution.u0);
    get_if(e, "umax", cfg.evolution.umax);
    get_if(e, "v0", cfg.evolution.v0);
    get_if(e, "vmax", cfg.evolution.vmax);
    get_if(e, "nonlinear", cfg.evolution.nonlinear);
    get_if(e, "potential", cfg.evolution.potential);
    get_if(e, "ell", cfg.evolution.ell);
    if (!(cfg.evolution.p > 1.0 && cfg.evolution.p < 5.0))
      throw ConfigError("evolution.p must lie in (1,5)");
    if (!(cfg.evolution.h > 0.0)) throw ConfigError("evolution.h must be > 0");
  }
  if (j.contains("multiplier")) {
    const auto& m = j["multiplier"];
    reject_unknown(m, {"eps", "delta", "delta1", "m_amplitude"}, "multiplier");
    get_if(m, "eps", cfg.multiplier.eps);
    get_if(m, "delta", cfg.multiplier.delta);
    get_if(m, "delta1", cfg.multiplier.delta1);
    get_if(m, "m_amplitude", cfg.multiplier.m_amplitude);
  }
  if (j.contains("diagnostics")) {
    const auto& d = j["diagnostics"];
    reject_unknown(d,
                   {"slice_u", "slice_vt", "gamma", "radii", "fit_window",
                    "sample_dt", "split_radius"},
                   "diagnostics");
    get_if(d, "slice_u", cfg.diagnostics.slice_u);
    get_if(d, "slice_vt", cfg.diagnostics.slice_vt);
    get_if(d, "gamma", cfg.diagnostics.gamma);
    get_if(d, "radii", cfg.diagnostics.radii);
    get_if(d, "sample_dt", cfg.diagnostics.sample_dt);
    get_if(d, "split_radius", cfg.diagnostics.split_radius);
    if (d.contains("fit_window")) {
      std::vector<double> w = d["fit_window"].get<std::vector<double>>();
      if (w.size() != 2 || !(w[0] < w[1]))
        throw ConfigError("diagnostics.fit_window must be [t1, t2], t1 < t2");
      cfg.diagnostics.fit_t1 = w[0];
      cfg.diagnostics.fit_t2 = w[1];
    }
  }
  if (j.contains("sweep")) {
    if (!j["sweep"].is_object())
      throw ConfigError("sweep must be an object of parameter -> value list");
    cfg.sweep = j["sweep"];
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace schwave
