#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/io.hpp"

using namespace casimir;
namespace fs = std::filesystem;

namespace {

const fs::path& sandbox() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "casimir_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunResult {
  int code = -1;
  std::string output;  // stdout + stderr
};

// The binary under test, driven exactly as a user would drive it; env
// assignments go through sh, so they apply to the child only.
RunResult run_cli_env(const std::string& env, const std::string& args) {
  fs::path log = sandbox() / "run.log";
  std::string cmd = env + (env.empty() ? "" : " ") + CASIMIR_BIN + " " + args +
                    " > " + log.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

RunResult run_cli(const std::string& args) { return run_cli_env("", args); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string scenario(const std::string& name) {
  return std::string(CASIMIR_DATA_DIR) + "/scenarios/" + name;
}

fs::path fresh_out(const std::string& name) {
  fs::path d = sandbox() / name;
  fs::remove_all(d);
  return d;
}

// Numeric CSV with one header line; cells[row][col].
std::vector<std::vector<std::string>> csv_rows(const fs::path& file) {
  std::ifstream in(file);
  REQUIRE(in.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path write_file(const std::string& name, const std::string& content) {
  fs::path p = sandbox() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

}  // namespace

TEST_CASE("epsilon tabulates a decreasing dielectric function") {
  fs::path out = fresh_out("eps");
  RunResult r = run_cli("epsilon --scenario " + scenario("epsilon_au.json") +
                        " --out " + out.string());
  REQUIRE(r.code == 0);
  auto rows = io::load_pair_csv(out / "epsilon.csv", "xi_ev", "eps");
  REQUIRE(rows.size() == 200);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].second > 1.0);
    if (i > 0) {
      CHECK(rows[i].first > rows[i - 1].first);
      CHECK(rows[i].second < rows[i - 1].second);
    }
  }
}

TEST_CASE("force sweeps attract, decay and reproduce byte-for-byte") {
  fs::path out = fresh_out("force_a");
  RunResult r = run_cli("force --scenario " + scenario("force_au_300k.json") +
                        " --out " + out.string());
  REQUIRE(r.code == 0);
  auto rows = csv_rows(out / "force.csv");
  REQUIRE(rows.size() == 21);
  double prev = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    double v = std::stod(rows[i][1]);
    CHECK(v < 0.0);
    if (i > 0) CHECK(std::abs(v) < std::abs(prev));
    prev = v;
  }

  fs::path out2 = fresh_out("force_b");
  run_cli("force --scenario " + scenario("force_au_300k.json") + " --out " +
          out2.string());
  CHECK(read_file(out / "force.csv") == read_file(out2 / "force.csv"));

  fs::path serial = fresh_out("force_serial");
  fs::path threaded = fresh_out("force_threaded");
  run_cli("force --scenario " + scenario("force_au_300k.json") + " --out " +
          serial.string() + " --threads 1");
  run_cli("force --scenario " + scenario("force_au_300k.json") + " --out " +
          threaded.string() + " --threads 4");
  CHECK(read_file(serial / "force.csv") == read_file(threaded / "force.csv"));
  CHECK(read_file(serial / "force.csv") == read_file(out / "force.csv"));
}

TEST_CASE("gradient sweeps with roughness stay positive and decay") {
  fs::path out = fresh_out("grad");
  RunResult r = run_cli("gradient --scenario " +
                        scenario("gradient_ni_rough.json") + " --out " +
                        out.string());
  REQUIRE(r.code == 0);
  auto rows = csv_rows(out / "gradient.csv");
  REQUIRE(rows.size() == 7);
  double prev = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    double v = std::stod(rows[i][1]);
    CHECK(v > 0.0);
    if (i > 0) CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("pressure reuses the sweep scenario with its own units column") {
  fs::path out = fresh_out("pressure");
  RunResult r = run_cli("pressure --scenario " +
                        scenario("force_au_300k.json") + " --out " +
                        out.string());
  REQUIRE(r.code == 0);
  std::string content = read_file(out / "pressure.csv");
  CHECK(content.find("value_mpa") != std::string::npos);
  auto rows = csv_rows(out / "pressure.csv");
  REQUIRE(rows.size() == 21);
  for (const auto& row : rows) CHECK(std::stod(row[1]) < 0.0);
}

TEST_CASE("kk transforms a loss table into epsilon along the imaginary axis") {
  fs::path out = fresh_out("kk");
  RunResult r = run_cli("kk --scenario " + scenario("kk_lorentz.json") +
                        " --out " + out.string());
  REQUIRE(r.code == 0);
  auto rows = csv_rows(out / "kk.csv");
  REQUIRE(rows.size() == 60);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) > 1.0);
    if (i > 0) CHECK(std::stod(rows[i][1]) < std::stod(rows[i - 1][1]));
  }
}

TEST_CASE("fit writes a loadable model that matches the sample generator") {
  fs::path out = fresh_out("fit");
  RunResult r = run_cli("fit --scenario " + scenario("fit_lorentz.json") +
                        " --out " + out.string());
  REQUIRE(r.code == 0);
  std::string report = read_file(out / "fit_report.json");
  CHECK(report.find("\"converged\": true") != std::string::npos);

  lifshitz::BodyMaterial fitted = io::load_material(out / "fitted_model.json");
  REQUIRE(fitted.model.lorentz.size() == 1);
  CHECK(fitted.model.lorentz[0].g_j == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fitted.model.lorentz[0].omega_j == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(fitted.model.lorentz[0].gamma_j == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("compare excludes the synthetic dataset over its full range") {
  fs::path out = fresh_out("cmp");
  RunResult r = run_cli("compare --scenario " +
                        scenario("compare_plasma_vs_drude.json") + " --out " +
                        out.string());
  REQUIRE(r.code == 0);
  std::string report = read_file(out / "report.json");
  CHECK(report.find("\"full_range_excluded\": true") != std::string::npos);
  CHECK(report.find("\"n_excluded\": 5") != std::string::npos);
  CHECK(report.find("over the entire measured range") != std::string::npos);

  auto plot = csv_rows(out / "plot.csv");
  REQUIRE(plot.size() == 5);
  for (const auto& row : plot) CHECK(row.back() == "excluded");

  fs::path out2 = fresh_out("cmp2");
  run_cli("compare --scenario " + scenario("compare_plasma_vs_drude.json") +
          " --out " + out2.string() + " --threads 3");
  CHECK(read_file(out / "report.json") == read_file(out2 / "report.json"));
  CHECK(read_file(out / "plot.csv") == read_file(out2 / "plot.csv"));
}

TEST_CASE("a failing run leaves no output directory behind") {
  auto bad = write_file("missing_material.json", R"({
    "quantity": "force",
    "geometry": {"sphere_radius_nm": 100000.0,
                 "separation_grid": {"start": 200.0, "stop": 300.0, "count": 2}},
    "material_1": "no_such_file.json",
    "material_2": "no_such_file.json"
  })");
  fs::path out = fresh_out("never_created");
  RunResult r = run_cli("force --scenario " + bad.string() + " --out " +
                        out.string());
  CHECK(r.code == 2);
  CHECK(r.output.find("parse error") != std::string::npos);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("exit codes separate parse, domain, numeric and coverage failures") {
  std::string ideal = std::string(CASIMIR_DATA_DIR) + "/materials/ideal.json";
  fs::path out = fresh_out("codes");

  auto broken = write_file("broken_scenario.json", "{ not json");
  CHECK(run_cli("force --scenario " + broken.string() + " --out " +
                out.string()).code == 2);

  CHECK(run_cli("force --out " + out.string()).code == 2);  // missing --scenario
  CHECK(run_cli("melt --scenario x --out y").code == 2);    // no such subcommand
  CHECK(run_cli("").code == 2);                             // no subcommand

  auto cold = write_file("negative_temperature.json", R"({
    "quantity": "force",
    "temperature_k": -5.0,
    "geometry": {"sphere_radius_nm": 100000.0,
                 "separation_grid": {"start": 200.0, "stop": 200.0, "count": 1}},
    "material_1": ")" + ideal + R"(",
    "material_2": ")" + ideal + R"("
  })");
  RunResult dom = run_cli("force --scenario " + cold.string() + " --out " +
                          out.string());
  CHECK(dom.code == 3);
  CHECK(dom.output.find("domain error") != std::string::npos);

  auto single = write_file("single_point.json", R"({
    "quantity": "force",
    "geometry": {"sphere_radius_nm": 100000.0,
                 "separation_grid": {"start": 200.0, "stop": 200.0, "count": 1}},
    "material_1": ")" + ideal + R"(",
    "material_2": ")" + ideal + R"("
  })");
  RunResult num = run_cli("force --scenario " + single.string() + " --out " +
                          out.string() + " --tolerance 1e-16");
  CHECK(num.code == 4);
  CHECK(num.output.find("numeric error") != std::string::npos);

  write_file("tiny_dataset.csv",
             "a_nm,da_nm,value,dvalue,quantity,confidence\n"
             "5000,25,-1.0,0.01,force_pn,0.95\n");
  auto uncovered = write_file("uncovered.json", R"({
    "geometry": {"sphere_radius_nm": 100000.0,
                 "separation_grid": {"values": [1000.0, 2000.0]}},
    "material_1": ")" + ideal + R"(",
    "material_2": ")" + ideal + R"(",
    "band": {"mode": "relative", "value": 0.005},
    "dataset": "tiny_dataset.csv"
  })");
  RunResult cov = run_cli("compare --scenario " + uncovered.string() +
                          " --out " + out.string());
  CHECK(cov.code == 5);
  CHECK(cov.output.find("coverage error") != std::string::npos);
}

TEST_CASE("the truncation override pins the Matsubara cutoff") {
  std::string ideal = std::string(CASIMIR_DATA_DIR) + "/materials/ideal.json";
  auto single = write_file("lmax_probe.json", R"({
    "quantity": "force",
    "geometry": {"sphere_radius_nm": 100000.0,
                 "separation_grid": {"start": 200.0, "stop": 200.0, "count": 1}},
    "material_1": ")" + ideal + R"(",
    "material_2": ")" + ideal + R"("
  })");
  fs::path out = fresh_out("lmax");
  RunResult r = run_cli("force --scenario " + single.string() + " --out " +
                        out.string() + " --l-max 5");
  REQUIRE(r.code == 0);
  auto rows = csv_rows(out / "force.csv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][2] == "5");
}

TEST_CASE("the constants table can be replaced wholesale") {
  std::string ideal = std::string(CASIMIR_DATA_DIR) + "/materials/ideal.json";
  auto single = write_file("constants_probe.json", R"({
    "quantity": "force",
    "geometry": {"sphere_radius_nm": 100000.0,
                 "separation_grid": {"start": 200.0, "stop": 200.0, "count": 1}},
    "material_1": ")" + ideal + R"(",
    "material_2": ")" + ideal + R"("
  })");
  fs::path base_out = fresh_out("const_base");
  REQUIRE(run_cli("force --scenario " + single.string() + " --out " +
                  base_out.string()).code == 0);

  auto table = write_file("constants_double_kt.json",
                          R"({"boltzmann_ev_per_k": 1.7234666e-4})");
  fs::path warm_out = fresh_out("const_warm");
  RunResult r = run_cli_env("CASIMIR_CONSTANTS_FILE=" + table.string(),
                            "force --scenario " + single.string() + " --out " +
                                warm_out.string());
  REQUIRE(r.code == 0);
  CHECK(read_file(base_out / "force.csv") != read_file(warm_out / "force.csv"));

  RunResult unreadable =
      run_cli_env("CASIMIR_CONSTANTS_FILE=/no/such/table",
                  "force --scenario " + single.string() + " --out " +
                      fresh_out("const_bad").string());
  CHECK(unreadable.code == 2);
}
