#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "casimir/compare.hpp"
#include "casimir/fit.hpp"
#include "casimir/io.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/roughness.hpp"

namespace casimir::cli {

// Ascending evaluation grid, either linear or logarithmic between the
// endpoints, or an explicit value list.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  bool log_spacing = false;
  std::vector<double> explicit_values;

  std::vector<double> values() const;
  void validate() const;
};

// One self-contained run description. All referenced paths resolve relative
// to the scenario file.
struct Scenario {
  lifshitz::Quantity quantity = lifshitz::Quantity::Force;
  double temperature_k = 300.0;
  double sphere_radius_nm = 0.0;
  GridSpec separation_grid;

  std::filesystem::path material_1;  // sphere
  std::filesystem::path material_2;  // plate
  std::optional<std::filesystem::path> roughness_1;
  std::optional<std::filesystem::path> roughness_2;
  int roughness_bins = 64;

  lifshitz::SolverOptions tolerances;

  std::optional<GridSpec> xi_grid;  // epsilon / kk tabulation

  struct KKJob {
    std::filesystem::path table_csv;
    double tail_exponent = 3.0;
  };
  std::optional<KKJob> kk;

  struct FitJob {
    std::filesystem::path samples_csv;
    materials::ModelFamily family = materials::ModelFamily::Modified;
    std::vector<double> initial;
    materials::FitOptions options;
  };
  std::optional<FitJob> fit;

  compare::BandHalfwidthSpec band;
  std::optional<std::filesystem::path> dataset;
  compare::VerdictPolicy verdict_policy;

  std::string provenance;  // content hash + file name, set by the loader
};

Scenario load_scenario(const std::filesystem::path& file);

// Separation sweep of the scenario's quantity, roughness-averaged when
// profiles are attached. Rows come back in grid order.
std::vector<io::SweepRow> run_sweep(const Scenario& sc);

// Theory band over the scenario grid: centers from run_sweep, halfwidths
// from the scenario's band spec.
compare::TheoryBand build_band(const Scenario& sc);

}  // namespace casimir::cli
