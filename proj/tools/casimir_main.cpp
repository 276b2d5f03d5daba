// Command-line front end: every subcommand reads one scenario JSON, runs the
// corresponding pipeline and writes its outputs into --out. Results are
// buffered and written only after the whole computation succeeds, so a
// failing run leaves no partial files behind.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casimir/errors.hpp"
#include "casimir/io.hpp"
#include "casimir/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace casimir;

constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitCoverage = 5;

struct Options {
  std::string scenario_file;
  std::string out_dir;
  double tolerance = 0.0;  // quadrature override when > 0
  int l_max = -1;          // override when >= 0
  int threads = -1;        // override when >= 0
};

struct OutputFile {
  std::string name;
  std::string content;
};

cli::Scenario load(const Options& opt) {
  cli::Scenario sc = cli::load_scenario(opt.scenario_file);
  if (opt.tolerance > 0.0) sc.tolerances.quad_rel_tol = opt.tolerance;
  if (opt.l_max >= 0) sc.tolerances.l_max = opt.l_max;
  if (opt.threads >= 0) sc.tolerances.threads = opt.threads;
  return sc;
}

const cli::GridSpec& xi_grid_of(const cli::Scenario& sc) {
  if (!sc.xi_grid) throw ParseError("scenario: this subcommand needs 'xi_grid'");
  return *sc.xi_grid;
}

std::vector<OutputFile> run_epsilon(const cli::Scenario& sc) {
  if (sc.material_1.empty())
    throw ParseError("scenario: epsilon needs 'material_1'");
  lifshitz::BodyMaterial body = io::load_material(sc.material_1);
  if (body.ideal)
    throw UnsupportedModelError("epsilon: ideal material has no dielectric table");
  std::vector<double> xi = xi_grid_of(sc).values();
  std::vector<double> eps;
  eps.reserve(xi.size());
  for (double x : xi) eps.push_back(materials::eval_eps_imag(body.model, x));
  std::ostringstream os;
  io::write_epsilon_csv(os, xi, eps);
  return {{"epsilon.csv", os.str()}};
}

std::vector<OutputFile> run_sweep_command(const cli::Scenario& sc,
                                          lifshitz::Quantity q) {
  cli::Scenario run = sc;
  run.quantity = q;
  std::vector<io::SweepRow> rows = cli::run_sweep(run);
  std::ostringstream os;
  io::write_sweep_csv(os, q, rows);
  const char* name = q == lifshitz::Quantity::Force ? "force.csv"
                     : q == lifshitz::Quantity::Gradient ? "gradient.csv"
                                                         : "pressure.csv";
  return {{name, os.str()}};
}

std::vector<OutputFile> run_kk(const cli::Scenario& sc) {
  if (!sc.kk) throw ParseError("scenario: kk subcommand needs a 'kk' section");
  materials::KKTable table =
      io::load_kk_csv(sc.kk->table_csv, sc.kk->tail_exponent);
  std::vector<double> xi = xi_grid_of(sc).values();
  std::vector<materials::KKDetail> rows;
  rows.reserve(xi.size());
  for (double x : xi) rows.push_back(materials::kk_transform_detail(table, x));
  std::ostringstream os;
  io::write_kk_csv(os, xi, rows);
  return {{"kk.csv", os.str()}};
}

std::vector<OutputFile> run_fit(const cli::Scenario& sc) {
  if (!sc.fit) throw ParseError("scenario: fit subcommand needs a 'fit' section");
  auto samples = io::load_pair_csv(sc.fit->samples_csv, "xi_ev", "eps");
  materials::FitResult fit = materials::fit_oscillator(
      samples, sc.fit->family, sc.fit->initial, sc.fit->options);
  lifshitz::BodyMaterial body;
  body.model = fit.model;
  body.label = "fitted";
  std::ostringstream model_os, report_os;
  io::write_material_json(model_os, body);
  io::write_fit_report_json(report_os, fit, sc.fit->family);
  return {{"fitted_model.json", model_os.str()},
          {"fit_report.json", report_os.str()}};
}

std::vector<OutputFile> run_compare(const cli::Scenario& sc) {
  if (!sc.dataset) throw ParseError("scenario: compare needs a 'dataset' file");
  compare::Dataset data = io::load_dataset(*sc.dataset);
  cli::Scenario run = sc;
  switch (data.quantity) {
    case compare::QuantityKind::ForcePn:
      run.quantity = lifshitz::Quantity::Force;
      break;
    case compare::QuantityKind::GradientUnPerM:
      run.quantity = lifshitz::Quantity::Gradient;
      break;
    case compare::QuantityKind::PressureMpa:
      run.quantity = lifshitz::Quantity::Pressure;
      break;
  }
  compare::TheoryBand band = cli::build_band(run);
  compare::ComparisonReport rep =
      compare::exclusion_summary(data, band, sc.verdict_policy);
  std::ostringstream report_os, plot_os;
  io::write_report_json(report_os, rep, band);
  io::write_plot_csv(plot_os, rep, band);
  return {{"report.json", report_os.str()}, {"plot.csv", plot_os.str()}};
}

void write_outputs(const std::string& out_dir,
                   const std::vector<OutputFile>& files) {
  fs::create_directories(out_dir);
  for (const auto& f : files) {
    std::ofstream os(fs::path(out_dir) / f.name, std::ios::binary);
    if (!os) throw Error("cannot write " + (fs::path(out_dir) / f.name).string());
    os << f.content;
  }
}

int dispatch(const std::string& cmd, const Options& opt) {
  try {
    cli::Scenario sc = load(opt);
    std::vector<OutputFile> files;
    if (cmd == "epsilon") files = run_epsilon(sc);
    else if (cmd == "force") files = run_sweep_command(sc, lifshitz::Quantity::Force);
    else if (cmd == "gradient") files = run_sweep_command(sc, lifshitz::Quantity::Gradient);
    else if (cmd == "pressure") files = run_sweep_command(sc, lifshitz::Quantity::Pressure);
    else if (cmd == "kk") files = run_kk(sc);
    else if (cmd == "fit") files = run_fit(sc);
    else if (cmd == "compare") files = run_compare(sc);
    write_outputs(opt.out_dir, files);
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const CoverageError& e) {
    std::cerr << "coverage error: " << e.what() << "\n";
    return kExitCoverage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifshitz force computations, roughness averaging and "
               "theory-experiment comparison"};
  app.require_subcommand(1);

  Options opt;
  std::vector<CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"epsilon", "dielectric response along the imaginary frequency axis"},
      {"force", "sphere-plate force over a separation grid"},
      {"gradient", "force gradient over a separation grid"},
      {"pressure", "equivalent parallel-plate pressure over a separation grid"},
      {"kk", "dispersion integral of a tabulated loss spectrum"},
      {"fit", "least-squares oscillator fit to response samples"},
      {"compare", "exclusion analysis of a dataset against a theory band"}};
  for (const auto& [name, blurb] : commands) {
    CLI::App* sub = app.add_subcommand(name, blurb);
    sub->add_option("--scenario", opt.scenario_file, "scenario JSON file")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory")->required();
    sub->add_option("--tolerance", opt.tolerance,
                    "override quadrature relative tolerance");
    sub->add_option("--l-max", opt.l_max, "override Matsubara truncation");
    sub->add_option("--threads", opt.threads, "worker threads (1 = serial)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }
  return dispatch(app.get_subcommands().front()->get_name(), opt);
}
