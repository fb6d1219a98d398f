#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "schwave/runner.hpp"

using namespace schwave;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& leaf) {
  fs::path p = fs::temp_directory_path() / "schwave_cli_io" / leaf;
  fs::create_directories(p.parent_path());
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json tiny_run_json() {
  return nlohmann::json{
      {"evolution", {{"umax", 10.0}, {"vmax", 45.0}, {"h", 0.5}}},
      {"diagnostics",
       {{"slice_u", {4.0, 8.0}},
        {"slice_vt", {30.0}},
        {"radii", {5.0, 10.0}},
        {"fit_window", {20.0, 50.0}}}}};
}

}  // namespace

TEST_CASE("config schema: defaults, rejection, hashing") {
  RunConfig def = parse_config(nlohmann::json::object());
  CHECK(def.evolution.p == 3.0);
  CHECK(def.evolution.h == 0.25);
  CHECK(def.multiplier.delta1 == 1e-4);
  CHECK(def.diagnostics.gamma == 1.5);

  // defaults are materialized into the normalized document
  nlohmann::json n = def.normalized();
  CHECK(n["evolution"]["p"] == 3.0);
  CHECK(n["multiplier"]["eps"] == 1e-3);
  CHECK(n["diagnostics"]["split_radius"] == 5.0);

  // hashing is stable and sensitive
  CHECK(def.hash() == parse_config(nlohmann::json::object()).hash());
  RunConfig other = def;
  other.evolution.amplitude = 2.0;
  CHECK(other.hash() != def.hash());

  // unknown keys rejected at every level
  CHECK_THROWS_AS(parse_config({{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"evolution", {{"hh", 0.1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"multiplier", {{"epsilon", 0.1}}}}),
                  ConfigError);
  // bad values rejected
  CHECK_THROWS_AS(parse_config({{"evolution", {{"p", 7.0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"evolution", {{"p", "three"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"chart", {{"M", -1.0}}}}), ConfigError);
  CHECK_THROWS_AS(
      parse_config({{"diagnostics", {{"fit_window", {50.0, 20.0}}}}}),
      ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("CSV formatting is bit-faithful") {
  SplitMix64 rng(77001ull);
  for (int i = 0; i < 200; ++i) {
    double x = std::exp(rng.uniform(-40.0, 40.0)) *
               (rng.uniform() < 0.5 ? -1.0 : 1.0);
    CHECK(std::strtod(csv_num(x).c_str(), nullptr) == x);
  }
  CHECK(csv_quote("plain") == "plain");
  CHECK(csv_quote("a,b") == "\"a,b\"");
  CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");

  std::string path = scratch("w.csv");
  {
    CsvWriter w(path, {"a", "b"});
    w.row({"x,y", csv_num(0.5)});
    w.close();
  }
  CHECK(slurp(path) == "a,b\n\"x,y\",0.5\n");
  CHECK_THROWS_AS(CsvWriter("/nonexistent/dir/x.csv", {"a"}), DiskError);

  std::uint64_t h1 = fnv1a_file(path);
  CHECK(h1 == fnv1a_file(path));
  {
    CsvWriter w(path, {"a", "b"});
    w.row({"x,y", csv_num(0.25)});
    w.close();
  }
  CHECK(fnv1a_file(path) != h1);
}

TEST_CASE("SVG plot emission") {
  std::string path = scratch("plot.svg");
  std::vector<std::pair<double, double>> xy;
  for (double t = 1.0; t < 100.0; t *= 1.3) xy.push_back({t, 1.0 / (t * t)});
  xy.push_back({200.0, 0.0});  // dropped in log-log
  svg_series_plot(path, "decay", xy, true);
  std::string body = slurp(path);
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("polyline") != std::string::npos);
  CHECK(body.find("log-log") != std::string::npos);
}

TEST_CASE("evolve runs are byte-reproducible") {
  RunConfig cfg = parse_config(tiny_run_json());
  std::string d1 = scratch("rep1"), d2 = scratch("rep2");
  run_evolve(cfg, d1);
  run_evolve(cfg, d2);
  for (const char* f : {"report.csv", "series.csv", "decay.svg"})
    CHECK(slurp(d1 + std::string("/") + f) == slurp(d2 + std::string("/") + f));

  nlohmann::json man;
  std::ifstream(d1 + "/manifest.json") >> man;
  CHECK(man["config_hash"].get<std::string>().size() == 16);
  CHECK(man["tool_version"] == kToolVersion);
  // inventory checksums match the files on disk
  for (auto& [name, entry] : man["files"].items()) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  (unsigned long long)fnv1a_file(d1 + "/" + name));
    CHECK(entry["fnv1a"].get<std::string>() == buf);
  }
}

TEST_CASE("sweeps, including the empty grid") {
  RunConfig cfg = parse_config(tiny_run_json());
  std::string d = scratch("sweep_empty");
  CHECK(run_sweep(cfg, d) == 0);
  CHECK(slurp(d + "/summary.csv") == "run_dir,parameters,max_abs_psi\n");

  cfg.sweep = {{"amplitude", {0.1, 1.0}}, {"p", {2.5, 3.0}}};
  std::string d4 = scratch("sweep_four");
  CHECK(run_sweep(cfg, d4) == 4);
  std::string body = slurp(d4 + "/summary.csv");
  CHECK(std::count(body.begin(), body.end(), '\n') == 5);  // header + 4 rows
  CHECK(fs::exists(d4 + "/run_3/manifest.json"));
}

TEST_CASE("convergence study reports second order") {
  RunConfig cfg = parse_config(tiny_run_json());
  ConvergeReport rep = run_converge(cfg, 3, scratch("conv"));
  REQUIRE(rep.order.size() == 1);
  CHECK(rep.order[0] == Catch::Approx(2.0).margin(0.5));
  CHECK_THROWS_AS(run_converge(cfg, 2, scratch("conv2")), ConfigError);
}

TEST_CASE("fit subcommand round-trips series data") {
  RunConfig cfg = parse_config(tiny_run_json());
  std::string d = scratch("fitrun");
  run_evolve(cfg, d);
  nlohmann::json j = run_fit(d, "abs_phi_r10", 25.0, 50.0);
  CHECK(std::isfinite(j["exponent"].get<double>()));
  CHECK(fs::exists(d + "/fit_abs_phi_r10.csv"));
  CHECK(fs::exists(d + "/fit_abs_phi_r10.svg"));
  CHECK_THROWS_AS(run_fit(d, "no_such_quantity", 25.0, 50.0), ConfigError);
}

TEST_CASE("report subcommand JSON payloads") {
  nlohmann::json thr = threshold_report_json(1.0);
  CHECK(thr["p0"].get<double>() == Catch::Approx(1.5228).margin(1e-3));
  nlohmann::json crt = exponent_certificate_json(3.0);
  CHECK(crt["feasible"] == true);
  nlohmann::json bad = exponent_certificate_json(2.0);
  CHECK(bad["feasible"] == false);
  nlohmann::json vid = verify_identity_json(1e-3, 5, 99001ull);
  CHECK(vid["morawetz"]["err_h"].get<double>() < 1e-5);
  CHECK(vid["rweight"]["err_h"].get<double>() < 1e-5);
  CHECK(vid["rweight_closed_forms_max_err"].get<double>() < 1e-10);
}
