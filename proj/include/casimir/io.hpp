#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "casimir/compare.hpp"
#include "casimir/fit.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/materials.hpp"
#include "casimir/roughness.hpp"

namespace casimir::io {

// All loaders throw ParseError for unreadable files, malformed syntax,
// missing or unknown fields; value-level invariant violations surface as
// DomainError from the type validators. Paths inside files resolve relative
// to the containing file.

// Material JSON: a `family` discriminator plus term objects whose keys match
// the model type fields. Families: ideal, drude, plasma, lorentz, modified,
// ninham_parsegian, tabulated. Optional top-level mu_static.
lifshitz::BodyMaterial load_material(const std::filesystem::path& file);
void write_material_json(std::ostream& os, const lifshitz::BodyMaterial& body);

// Loss table CSV with header omega_ev,im_eps, ascending omega.
materials::KKTable load_kk_csv(const std::filesystem::path& file,
                               double tail_exponent);

// Roughness CSV: either a histogram with header fraction,height_nm or a raw
// height map with header height_nm (binned into `bins` equal-width bins).
roughness::RoughnessProfile load_profile(const std::filesystem::path& file,
                                         int bins = 64);

// Dataset CSV with header a_nm,da_nm,value,dvalue,quantity,confidence; the
// quantity column must be uniform.
compare::Dataset load_dataset(const std::filesystem::path& file);

// Two-column CSV with the given header names (e.g. xi_ev,eps samples or
// a_nm,halfwidth band tables).
std::vector<std::pair<double, double>> load_pair_csv(
    const std::filesystem::path& file, const std::string& col_a,
    const std::string& col_b);

// Fixed scientific notation, 9 significant digits; the one number format
// used in every generated file so regression output is stable.
std::string format_sci(double v);

void write_epsilon_csv(std::ostream& os, const std::vector<double>& xi,
                       const std::vector<double>& eps);
void write_kk_csv(std::ostream& os, const std::vector<double>& xi,
                  const std::vector<materials::KKDetail>& rows);

struct SweepRow {
  double a_nm = 0.0;
  lifshitz::ForceResult result;
};
void write_sweep_csv(std::ostream& os, lifshitz::Quantity q,
                     const std::vector<SweepRow>& rows);

void write_report_json(std::ostream& os, const compare::ComparisonReport& rep,
                       const compare::TheoryBand& band);
void write_plot_csv(std::ostream& os, const compare::ComparisonReport& rep,
                    const compare::TheoryBand& band);

void write_fit_report_json(std::ostream& os, const materials::FitResult& fit,
                           materials::ModelFamily family);

}  // namespace casimir::io
