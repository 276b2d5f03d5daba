#include "casimir/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "casimir/errors.hpp"

namespace casimir::io {

namespace {

using nlohmann::json;

std::string where(const std::filesystem::path& file, size_t line = 0) {
  std::string s = file.string();
  if (line) s += ":" + std::to_string(line);
  return s;
}

std::ifstream open_or_throw(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot read " + file.string());
  return in;
}

json parse_json(const std::filesystem::path& file) {
  auto in = open_or_throw(file);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(where(file) + ": " + e.what());
  }
}

double require_number(const json& j, const std::string& key,
                      const std::filesystem::path& file) {
  if (!j.contains(key))
    throw ParseError(where(file) + ": missing field '" + key + "'");
  if (!j.at(key).is_number())
    throw ParseError(where(file) + ": field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::filesystem::path& file,
                    const std::string& context) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw ParseError(where(file) + ": unknown field '" + key + "' in " +
                       context);
}

// Minimal CSV reading: comma-separated numeric columns under an exact
// header, tolerant of blank lines and trailing carriage returns.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<size_t> line_numbers;
};

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    size_t b = cell.find_first_not_of(" \t");
    size_t e = cell.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

Csv read_csv(const std::filesystem::path& file) {
  auto in = open_or_throw(file);
  Csv csv;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_line(line);
    if (csv.header.empty()) {
      csv.header = cells;
    } else {
      if (cells.size() != csv.header.size())
        throw ParseError(where(file, lineno) + ": expected " +
                         std::to_string(csv.header.size()) + " columns, got " +
                         std::to_string(cells.size()));
      csv.rows.push_back(cells);
      csv.line_numbers.push_back(lineno);
    }
  }
  if (csv.header.empty()) throw ParseError(where(file) + ": empty file");
  return csv;
}

double parse_double(const std::string& cell, const std::filesystem::path& file,
                    size_t lineno) {
  try {
    size_t pos = 0;
    double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where(file, lineno) + ": not a number: '" + cell + "'");
  }
}

void expect_header(const Csv& csv, const std::vector<std::string>& expected,
                   const std::filesystem::path& file) {
  if (csv.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw ParseError(where(file) + ": expected header '" + want + "'");
  }
}

materials::LorentzTerm parse_lorentz(const json& j,
                                     const std::filesystem::path& file) {
  reject_unknown(j, {"g_j", "omega_j", "gamma_j"}, file, "lorentz term");
  materials::LorentzTerm t;
  t.g_j = require_number(j, "g_j", file);
  t.omega_j = require_number(j, "omega_j", file);
  t.gamma_j = j.contains("gamma_j") ? require_number(j, "gamma_j", file) : 0.0;
  return t;
}

}  // namespace

lifshitz::BodyMaterial load_material(const std::filesystem::path& file) {
  json j = parse_json(file);
  if (!j.is_object()) throw ParseError(where(file) + ": expected a JSON object");
  if (!j.contains("family") || !j.at("family").is_string())
    throw ParseError(where(file) + ": missing 'family' string");
  std::string family = j.at("family").get<std::string>();

  lifshitz::BodyMaterial body;
  body.label = file.stem().string();
  if (j.contains("mu_static"))
    body.mu_static = require_number(j, "mu_static", file);

  auto parse_drude = [&](const json& d) {
    reject_unknown(d, {"omega_p", "gamma_0"}, file, "drude term");
    materials::DrudeTerm t;
    t.omega_p = require_number(d, "omega_p", file);
    t.gamma_0 = d.contains("gamma_0") ? require_number(d, "gamma_0", file) : 0.0;
    return t;
  };

  std::set<std::string> allowed = {"family", "mu_static"};
  if (family == "ideal") {
    body.ideal = true;
  } else if (family == "drude" || family == "plasma") {
    allowed.insert({"drude", "lorentz"});
    if (!j.contains("drude"))
      throw ParseError(where(file) + ": family '" + family + "' needs a 'drude' object");
    body.model.drude = parse_drude(j.at("drude"));
    if (family == "plasma" && body.model.drude->gamma_0 != 0.0)
      throw ParseError(where(file) + ": plasma family requires gamma_0 = 0");
    if (j.contains("lorentz"))
      for (const auto& t : j.at("lorentz")) body.model.lorentz.push_back(parse_lorentz(t, file));
  } else if (family == "lorentz") {
    allowed.insert("lorentz");
    if (!j.contains("lorentz") || !j.at("lorentz").is_array() || j.at("lorentz").empty())
      throw ParseError(where(file) + ": family 'lorentz' needs a nonempty 'lorentz' array");
    for (const auto& t : j.at("lorentz")) body.model.lorentz.push_back(parse_lorentz(t, file));
  } else if (family == "modified") {
    allowed.insert({"drude", "modified"});
    if (!j.contains("modified"))
      throw ParseError(where(file) + ": family 'modified' needs a 'modified' object");
    const json& m = j.at("modified");
    reject_unknown(m, {"g_uv", "omega_uv", "alpha"}, file, "modified term");
    materials::ModifiedOscillatorTerm t;
    t.g_uv = require_number(m, "g_uv", file);
    t.omega_uv = require_number(m, "omega_uv", file);
    t.alpha = require_number(m, "alpha", file);
    body.model.modified = t;
    if (j.contains("drude")) body.model.drude = parse_drude(j.at("drude"));
  } else if (family == "ninham_parsegian") {
    allowed.insert("ninham_parsegian");
    if (!j.contains("ninham_parsegian"))
      throw ParseError(where(file) +
                       ": family 'ninham_parsegian' needs a 'ninham_parsegian' object");
    const json& m = j.at("ninham_parsegian");
    reject_unknown(m, {"g_ir", "omega_ir", "g_uv", "omega_uv"}, file,
                   "ninham_parsegian term");
    materials::NinhamParsegianTerm t;
    t.g_ir = require_number(m, "g_ir", file);
    t.omega_ir = require_number(m, "omega_ir", file);
    t.g_uv = require_number(m, "g_uv", file);
    t.omega_uv = require_number(m, "omega_uv", file);
    body.model.ninham_parsegian = t;
  } else if (family == "tabulated") {
    allowed.insert({"table_csv", "tail_exponent"});
    if (!j.contains("table_csv") || !j.at("table_csv").is_string())
      throw ParseError(where(file) + ": family 'tabulated' needs a 'table_csv' path");
    double tail = j.contains("tail_exponent")
                      ? require_number(j, "tail_exponent", file)
                      : 3.0;
    auto csv = file.parent_path() / j.at("table_csv").get<std::string>();
    body.model.tabulated = load_kk_csv(csv, tail);
  } else {
    throw ParseError(where(file) + ": unknown family '" + family + "'");
  }
  reject_unknown(j, allowed, file, "material");
  body.validate();
  return body;
}

materials::KKTable load_kk_csv(const std::filesystem::path& file,
                               double tail_exponent) {
  Csv csv = read_csv(file);
  expect_header(csv, {"omega_ev", "im_eps"}, file);
  materials::KKTable t;
  t.tail_exponent = tail_exponent;
  for (size_t i = 0; i < csv.rows.size(); ++i) {
    t.omega_ev.push_back(parse_double(csv.rows[i][0], file, csv.line_numbers[i]));
    t.im_eps.push_back(parse_double(csv.rows[i][1], file, csv.line_numbers[i]));
  }
  t.validate();
  return t;
}

roughness::RoughnessProfile load_profile(const std::filesystem::path& file,
                                         int bins) {
  Csv csv = read_csv(file);
  if (csv.header == std::vector<std::string>{"fraction", "height_nm"}) {
    roughness::RoughnessProfile p;
    for (size_t i = 0; i < csv.rows.size(); ++i) {
      p.fraction.push_back(parse_double(csv.rows[i][0], file, csv.line_numbers[i]));
      p.height_nm.push_back(parse_double(csv.rows[i][1], file, csv.line_numbers[i]));
    }
    p.validate();
    return p;
  }
  if (csv.header == std::vector<std::string>{"height_nm"}) {
    std::vector<double> samples;
    for (size_t i = 0; i < csv.rows.size(); ++i)
      samples.push_back(parse_double(csv.rows[i][0], file, csv.line_numbers[i]));
    return roughness::RoughnessProfile::from_heights(samples, bins);
  }
  throw ParseError(where(file) +
                   ": expected header 'fraction,height_nm' or 'height_nm'");
}

compare::Dataset load_dataset(const std::filesystem::path& file) {
  Csv csv = read_csv(file);
  expect_header(csv, {"a_nm", "da_nm", "value", "dvalue", "quantity", "confidence"},
                file);
  if (csv.rows.empty()) throw ParseError(where(file) + ": dataset has no rows");
  compare::Dataset ds;
  for (size_t i = 0; i < csv.rows.size(); ++i) {
    size_t ln = csv.line_numbers[i];
    compare::MeasurementPoint p;
    p.a_nm = parse_double(csv.rows[i][0], file, ln);
    p.da_nm = parse_double(csv.rows[i][1], file, ln);
    p.value = parse_double(csv.rows[i][2], file, ln);
    p.dvalue = parse_double(csv.rows[i][3], file, ln);
    compare::QuantityKind q;
    try {
      q = compare::quantity_from_string(csv.rows[i][4]);
    } catch (const ParseError&) {
      throw ParseError(where(file, ln) + ": unknown quantity '" + csv.rows[i][4] + "'");
    }
    p.confidence = parse_double(csv.rows[i][5], file, ln);
    if (i == 0) {
      ds.quantity = q;
    } else if (q != ds.quantity) {
      throw ParseError(where(file, ln) + ": mixed quantities in one dataset");
    }
    p.validate();
    ds.points.push_back(p);
  }
  return ds;
}

std::vector<std::pair<double, double>> load_pair_csv(
    const std::filesystem::path& file, const std::string& col_a,
    const std::string& col_b) {
  Csv csv = read_csv(file);
  expect_header(csv, {col_a, col_b}, file);
  std::vector<std::pair<double, double>> out;
  for (size_t i = 0; i < csv.rows.size(); ++i)
    out.emplace_back(parse_double(csv.rows[i][0], file, csv.line_numbers[i]),
                     parse_double(csv.rows[i][1], file, csv.line_numbers[i]));
  return out;
}

std::string format_sci(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

void write_material_json(std::ostream& os, const lifshitz::BodyMaterial& body) {
  // Emitted by hand so key order and number format stay fixed.
  const auto& m = body.model;
  os << "{\n";
  std::string family;
  if (body.ideal) family = "ideal";
  else if (m.modified) family = "modified";
  else if (m.drude) family = m.drude->gamma_0 == 0.0 ? "plasma" : "drude";
  else if (m.ninham_parsegian) family = "ninham_parsegian";
  else if (m.tabulated) family = "tabulated";
  else family = "lorentz";
  os << "  \"family\": \"" << family << "\"";
  if (m.drude) {
    os << ",\n  \"drude\": {\"omega_p\": " << format_sci(m.drude->omega_p)
       << ", \"gamma_0\": " << format_sci(m.drude->gamma_0) << "}";
  }
  if (!m.lorentz.empty()) {
    os << ",\n  \"lorentz\": [";
    for (size_t i = 0; i < m.lorentz.size(); ++i) {
      if (i) os << ", ";
      os << "{\"g_j\": " << format_sci(m.lorentz[i].g_j)
         << ", \"omega_j\": " << format_sci(m.lorentz[i].omega_j)
         << ", \"gamma_j\": " << format_sci(m.lorentz[i].gamma_j) << "}";
    }
    os << "]";
  }
  if (m.modified) {
    os << ",\n  \"modified\": {\"g_uv\": " << format_sci(m.modified->g_uv)
       << ", \"omega_uv\": " << format_sci(m.modified->omega_uv)
       << ", \"alpha\": " << format_sci(m.modified->alpha) << "}";
  }
  if (m.ninham_parsegian) {
    os << ",\n  \"ninham_parsegian\": {\"g_ir\": "
       << format_sci(m.ninham_parsegian->g_ir)
       << ", \"omega_ir\": " << format_sci(m.ninham_parsegian->omega_ir)
       << ", \"g_uv\": " << format_sci(m.ninham_parsegian->g_uv)
       << ", \"omega_uv\": " << format_sci(m.ninham_parsegian->omega_uv) << "}";
  }
  if (body.mu_static != 1.0)
    os << ",\n  \"mu_static\": " << format_sci(body.mu_static);
  os << "\n}\n";
}

void write_epsilon_csv(std::ostream& os, const std::vector<double>& xi,
                       const std::vector<double>& eps) {
  os << "xi_ev,eps\n";
  for (size_t i = 0; i < xi.size(); ++i)
    os << format_sci(xi[i]) << "," << format_sci(eps[i]) << "\n";
}

void write_kk_csv(std::ostream& os, const std::vector<double>& xi,
                  const std::vector<materials::KKDetail>& rows) {
  os << "xi_ev,eps,tail,below_min_bound\n";
  for (size_t i = 0; i < xi.size(); ++i)
    os << format_sci(xi[i]) << "," << format_sci(rows[i].eps) << ","
       << format_sci(rows[i].tail) << "," << format_sci(rows[i].below_min_bound)
       << "\n";
}

void write_sweep_csv(std::ostream& os, lifshitz::Quantity q,
                     const std::vector<SweepRow>& rows) {
  const char* value_col = q == lifshitz::Quantity::Force ? "value_pn"
                          : q == lifshitz::Quantity::Gradient
                              ? "value_un_per_m"
                              : "value_mpa";
  os << "a_nm," << value_col
     << ",truncation_l,tail_estimate,quadrature_error,a_over_r,pfa_warning\n";
  for (const auto& r : rows) {
    os << format_sci(r.a_nm) << "," << format_sci(r.result.value) << ","
       << r.result.truncation_l << "," << format_sci(r.result.tail_estimate)
       << "," << format_sci(r.result.quadrature_error) << ","
       << format_sci(r.result.a_over_r) << ","
       << (r.result.pfa_warning ? 1 : 0) << "\n";
  }
}

namespace {

const char* verdict_name(compare::Verdict v) {
  return v == compare::Verdict::Excluded ? "excluded" : "consistent";
}

}  // namespace

void write_report_json(std::ostream& os, const compare::ComparisonReport& rep,
                       const compare::TheoryBand& band) {
  os << "{\n";
  os << "  \"quantity\": \"" << compare::quantity_name(rep.quantity) << "\",\n";
  os << "  \"band_provenance\": \"" << band.provenance << "\",\n";
  os << "  \"n_points\": " << rep.points.size() << ",\n";
  os << "  \"n_consistent\": " << rep.n_consistent << ",\n";
  os << "  \"n_excluded\": " << rep.n_excluded << ",\n";
  os << "  \"full_range_excluded\": "
     << (rep.full_range_excluded ? "true" : "false") << ",\n";
  os << "  \"points\": [\n";
  for (size_t i = 0; i < rep.points.size(); ++i) {
    const auto& p = rep.points[i];
    os << "    {\"a_nm\": " << format_sci(p.a_nm)
       << ", \"da_nm\": " << format_sci(p.da_nm)
       << ", \"value\": " << format_sci(p.value)
       << ", \"dvalue\": " << format_sci(p.dvalue)
       << ", \"confidence\": " << format_sci(p.confidence)
       << ", \"band_lo\": " << format_sci(band.lo_at(p.a_nm))
       << ", \"band_hi\": " << format_sci(band.hi_at(p.a_nm))
       << ", \"verdict\": \"" << verdict_name(rep.verdicts[i].verdict)
       << "\", \"margin\": " << format_sci(rep.verdicts[i].margin) << "}"
       << (i + 1 < rep.points.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"exclusion_windows\": [\n";
  for (size_t i = 0; i < rep.windows.size(); ++i) {
    const auto& w = rep.windows[i];
    os << "    {\"a_lo_nm\": " << format_sci(w.a_lo_nm)
       << ", \"a_hi_nm\": " << format_sci(w.a_hi_nm)
       << ", \"first_index\": " << w.first_index
       << ", \"last_index\": " << w.last_index << "}"
       << (i + 1 < rep.windows.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"statements\": [\n";
  for (size_t i = 0; i < rep.statements.size(); ++i)
    os << "    \"" << rep.statements[i] << "\""
       << (i + 1 < rep.statements.size() ? "," : "") << "\n";
  os << "  ]\n";
  os << "}\n";
}

void write_plot_csv(std::ostream& os, const compare::ComparisonReport& rep,
                    const compare::TheoryBand& band) {
  os << "a_nm,center,lo,hi,exp_value,exp_dvalue,verdict\n";
  for (size_t i = 0; i < rep.points.size(); ++i) {
    const auto& p = rep.points[i];
    double lo = band.lo_at(p.a_nm);
    double hi = band.hi_at(p.a_nm);
    os << format_sci(p.a_nm) << "," << format_sci(0.5 * (lo + hi)) << ","
       << format_sci(lo) << "," << format_sci(hi) << "," << format_sci(p.value)
       << "," << format_sci(p.dvalue) << ","
       << verdict_name(rep.verdicts[i].verdict) << "\n";
  }
}

void write_fit_report_json(std::ostream& os, const materials::FitResult& fit,
                           materials::ModelFamily family) {
  os << "{\n";
  os << "  \"family\": \"" << materials::family_name(family) << "\",\n";
  os << "  \"residual_norm\": " << format_sci(fit.residual_norm) << ",\n";
  os << "  \"iterations\": " << fit.iterations << ",\n";
  os << "  \"converged\": " << (fit.converged ? "true" : "false") << "\n";
  os << "}\n";
}

}  // namespace casimir::io
