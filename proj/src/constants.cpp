#include "casimir/constants.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

PhysicalConstants load_table() {
  PhysicalConstants c;
  const char* path = std::getenv("CASIMIR_CONSTANTS_FILE");
  if (path == nullptr || *path == '\0') return c;
  std::ifstream in(path);
  if (!in) throw ParseError(std::string("constants override not readable: ") + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("constants override: ") + e.what());
  }
  auto take = [&j](const char* key, double& slot) {
    if (j.contains(key)) slot = j.at(key).get<double>();
  };
  take("hbar_c_ev_nm", c.hbar_c_ev_nm);
  take("boltzmann_ev_per_k", c.boltzmann_ev_per_k);
  take("piconewton_per_ev_nm", c.piconewton_per_ev_nm);
  take("coulomb_ev_nm", c.coulomb_ev_nm);
  take("electron_mc2_ev", c.electron_mc2_ev);
  return c;
}

}  // namespace

const PhysicalConstants& constants() {
  static const PhysicalConstants table = load_table();
  return table;
}

double pn_from_ev_per_nm(double f) { return f * constants().piconewton_per_ev_nm; }

// 1 eV/nm^2 = 160.21766 pN/nm; 1 pN/nm = 1e-3 N/m = 1e3 uN/m.
double un_per_m_from_ev_per_nm2(double g) {
  return g * constants().piconewton_per_ev_nm * 1e3;
}

// 1 eV/nm^3 = 160.21766 pN/nm^2 = 1.6021766e11 mPa.
double mpa_from_ev_per_nm3(double p) {
  return p * constants().piconewton_per_ev_nm * 1e9;
}

}  // namespace casimir
