#include "casimir/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "casimir/errors.hpp"

namespace casimir::cli {

namespace {

using nlohmann::json;

std::string fnv1a_hex(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double get_number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ParseError("scenario: field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

double require_num(const json& j, const std::string& key,
                   const std::string& context) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ParseError("scenario: " + context + " needs numeric field '" + key + "'");
  return j.at(key).get<double>();
}

std::string require_str(const json& j, const std::string& key,
                        const std::string& context) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw ParseError("scenario: " + context + " needs string field '" + key + "'");
  return j.at(key).get<std::string>();
}

GridSpec parse_grid(const json& j, const std::string& context) {
  GridSpec g;
  if (j.contains("values")) {
    if (!j.at("values").is_array() || j.at("values").empty())
      throw ParseError("scenario: " + context + ".values must be a nonempty array");
    for (const auto& v : j.at("values")) {
      if (!v.is_number())
        throw ParseError("scenario: " + context + ".values must be numeric");
      g.explicit_values.push_back(v.get<double>());
    }
  } else {
    g.start = require_num(j, "start", context);
    g.stop = require_num(j, "stop", context);
    double count = require_num(j, "count", context);
    g.count = int(count);
    if (g.count != count)
      throw ParseError("scenario: " + context + ".count must be an integer");
    if (j.contains("spacing")) {
      std::string s = require_str(j, "spacing", context);
      if (s == "log") g.log_spacing = true;
      else if (s != "linear")
        throw ParseError("scenario: " + context + ".spacing must be linear or log");
    }
  }
  g.validate();
  return g;
}

lifshitz::Quantity parse_quantity(const std::string& s) {
  if (s == "force") return lifshitz::Quantity::Force;
  if (s == "gradient") return lifshitz::Quantity::Gradient;
  if (s == "pressure") return lifshitz::Quantity::Pressure;
  throw ParseError("scenario: unknown quantity '" + s + "'");
}

}  // namespace

void GridSpec::validate() const {
  if (!explicit_values.empty()) {
    for (size_t i = 0; i < explicit_values.size(); ++i) {
      if (!(explicit_values[i] > 0.0))
        throw DomainError("grid values must be positive");
      if (i > 0 && !(explicit_values[i] > explicit_values[i - 1]))
        throw DomainError("grid values must be strictly ascending");
    }
    return;
  }
  if (count < 1) throw DomainError("grid needs at least one point");
  if (!(start > 0.0)) throw DomainError("grid start must be positive");
  if (count > 1 && !(stop > start))
    throw DomainError("grid stop must exceed start");
}

std::vector<double> GridSpec::values() const {
  validate();
  if (!explicit_values.empty()) return explicit_values;
  std::vector<double> out;
  out.reserve(size_t(count));
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  for (int i = 0; i < count; ++i) {
    double t = double(i) / double(count - 1);
    out.push_back(log_spacing ? start * std::exp(t * std::log(stop / start))
                              : start + t * (stop - start));
  }
  return out;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot read scenario " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  if (!j.is_object())
    throw ParseError(file.string() + ": scenario must be a JSON object");

  static const std::set<std::string> kKnown = {
      "quantity",  "temperature_k", "geometry",  "material_1", "material_2",
      "roughness_1", "roughness_2", "roughness_bins", "tolerances",
      "xi_grid",   "kk",            "fit",       "band",       "dataset",
      "verdict"};
  for (const auto& [key, _] : j.items())
    if (!kKnown.count(key))
      throw ParseError(file.string() + ": unknown scenario field '" + key + "'");

  Scenario sc;
  auto dir = file.parent_path();
  auto resolve = [&dir](const std::string& p) { return dir / p; };

  if (j.contains("quantity"))
    sc.quantity = parse_quantity(require_str(j, "quantity", "scenario"));
  sc.temperature_k = get_number(j, "temperature_k", 300.0);

  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    sc.sphere_radius_nm = get_number(g, "sphere_radius_nm", 0.0);
    if (g.contains("separation_grid"))
      sc.separation_grid = parse_grid(g.at("separation_grid"), "separation_grid");
  }

  if (j.contains("material_1"))
    sc.material_1 = resolve(require_str(j, "material_1", "scenario"));
  if (j.contains("material_2"))
    sc.material_2 = resolve(require_str(j, "material_2", "scenario"));
  if (j.contains("roughness_1"))
    sc.roughness_1 = resolve(require_str(j, "roughness_1", "scenario"));
  if (j.contains("roughness_2"))
    sc.roughness_2 = resolve(require_str(j, "roughness_2", "scenario"));
  sc.roughness_bins = int(get_number(j, "roughness_bins", 64));

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    sc.tolerances.quad_rel_tol = get_number(t, "quad_rel_tol", 1e-8);
    sc.tolerances.tail_rel_tol = get_number(t, "tail_rel_tol", 1e-7);
    if (t.contains("l_max")) sc.tolerances.l_max = int(require_num(t, "l_max", "tolerances"));
    sc.tolerances.threads = int(get_number(t, "threads", 0));
  }

  if (j.contains("xi_grid")) sc.xi_grid = parse_grid(j.at("xi_grid"), "xi_grid");

  if (j.contains("kk")) {
    Scenario::KKJob job;
    job.table_csv = resolve(require_str(j.at("kk"), "table_csv", "kk"));
    job.tail_exponent = get_number(j.at("kk"), "tail_exponent", 3.0);
    sc.kk = job;
  }

  if (j.contains("fit")) {
    const json& f = j.at("fit");
    Scenario::FitJob job;
    job.samples_csv = resolve(require_str(f, "samples_csv", "fit"));
    job.family = materials::family_from_string(require_str(f, "family", "fit"));
    if (!f.contains("initial") || !f.at("initial").is_array())
      throw ParseError("scenario: fit needs an 'initial' parameter array");
    for (const auto& v : f.at("initial")) job.initial.push_back(v.get<double>());
    job.options.max_iterations = int(get_number(f, "max_iterations", 20000));
    job.options.restarts = int(get_number(f, "restarts", 4));
    job.options.lorentz_terms = int(get_number(f, "lorentz_terms", 1));
    sc.fit = job;
  }

  if (j.contains("band")) {
    const json& b = j.at("band");
    std::string mode = require_str(b, "mode", "band");
    if (mode == "absolute") {
      sc.band.mode = compare::BandHalfwidthSpec::Mode::Absolute;
      sc.band.value = require_num(b, "value", "band");
    } else if (mode == "relative") {
      sc.band.mode = compare::BandHalfwidthSpec::Mode::RelativeToCenter;
      sc.band.value = require_num(b, "value", "band");
    } else if (mode == "table") {
      sc.band.mode = compare::BandHalfwidthSpec::Mode::Table;
      sc.band.table = io::load_pair_csv(resolve(require_str(b, "table_csv", "band")),
                                        "a_nm", "halfwidth");
    } else {
      throw ParseError("scenario: band.mode must be absolute, relative or table");
    }
  }

  if (j.contains("dataset"))
    sc.dataset = resolve(require_str(j, "dataset", "scenario"));

  if (j.contains("verdict"))
    sc.verdict_policy.quadrature_combined =
        j.at("verdict").value("quadrature_combined", false);

  sc.provenance = file.stem().string() + "#" + fnv1a_hex(j.dump());
  return sc;
}

namespace {

lifshitz::ForceResult evaluate_quantity(lifshitz::Quantity q,
                                        const lifshitz::Geometry& g,
                                        const lifshitz::BodyMaterial& sphere,
                                        const lifshitz::BodyMaterial& plate,
                                        const lifshitz::MatsubaraGrid& grid,
                                        const lifshitz::SolverOptions& opts) {
  switch (q) {
    case lifshitz::Quantity::Force:
      return lifshitz::force_sphere_plate(g, sphere, plate, grid, opts);
    case lifshitz::Quantity::Gradient:
      return lifshitz::gradient_sphere_plate(g, sphere, plate, grid, opts);
    case lifshitz::Quantity::Pressure:
      return lifshitz::pressure_effective(g, sphere, plate, grid, opts);
  }
  throw DomainError("unknown quantity");
}

}  // namespace

std::vector<io::SweepRow> run_sweep(const Scenario& sc) {
  if (sc.material_1.empty() || sc.material_2.empty())
    throw ParseError("scenario: material_1 and material_2 are required");
  lifshitz::BodyMaterial sphere = io::load_material(sc.material_1);
  lifshitz::BodyMaterial plate = io::load_material(sc.material_2);
  std::optional<roughness::RoughnessProfile> rough1, rough2;
  if (sc.roughness_1) rough1 = io::load_profile(*sc.roughness_1, sc.roughness_bins);
  if (sc.roughness_2) rough2 = io::load_profile(*sc.roughness_2, sc.roughness_bins);

  lifshitz::MatsubaraGrid grid{sc.temperature_k};
  std::vector<double> separations = sc.separation_grid.values();
  std::vector<io::SweepRow> rows;
  rows.reserve(separations.size());

  for (double a : separations) {
    io::SweepRow row;
    row.a_nm = a;
    lifshitz::Geometry geom{sc.sphere_radius_nm, a};
    if (!rough1 && !rough2) {
      row.result = evaluate_quantity(sc.quantity, geom, sphere, plate, grid,
                                     sc.tolerances);
    } else {
      roughness::RoughnessProfile p1 =
          rough1 ? *rough1 : roughness::RoughnessProfile::flat();
      roughness::RoughnessProfile p2 =
          rough2 ? *rough2 : roughness::RoughnessProfile::flat();
      // Average the quantity over bin pairs; diagnostics aggregate as
      // worst-case so the reported bounds still hold for the average.
      lifshitz::ForceResult agg;
      agg.quantity = sc.quantity;
      bool first = true;
      auto f = [&](double gap) {
        lifshitz::Geometry shifted{sc.sphere_radius_nm, gap};
        lifshitz::ForceResult r = evaluate_quantity(
            sc.quantity, shifted, sphere, plate, grid, sc.tolerances);
        agg.truncation_l = first ? r.truncation_l
                                 : std::max(agg.truncation_l, r.truncation_l);
        agg.tail_estimate = std::max(agg.tail_estimate, r.tail_estimate);
        agg.quadrature_error = std::max(agg.quadrature_error, r.quadrature_error);
        first = false;
        return r.value;
      };
      agg.value = roughness::averaged_quantity(f, a, p1, p2);
      agg.a_over_r = geom.a_over_r();
      agg.pfa_warning = geom.pfa_strained();
      row.result = agg;
    }
    rows.push_back(row);
  }
  return rows;
}

compare::TheoryBand build_band(const Scenario& sc) {
  std::vector<io::SweepRow> rows = run_sweep(sc);
  std::vector<double> a, center;
  a.reserve(rows.size());
  center.reserve(rows.size());
  for (const auto& r : rows) {
    a.push_back(r.a_nm);
    center.push_back(r.result.value);
  }
  std::string provenance = sc.provenance + ";materials:" +
                           sc.material_1.stem().string() + "," +
                           sc.material_2.stem().string();
  return compare::make_band(a, center, sc.band, provenance);
}

}  // namespace casimir::cli
