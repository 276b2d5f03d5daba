#pragma once

namespace casimir {

// Single source of truth for unit conversion. Frequencies are eV throughout,
// lengths nm, temperatures kelvin; everything else is derived from this table.
struct PhysicalConstants {
  double hbar_c_ev_nm = 197.3269804;        // hbar*c
  double boltzmann_ev_per_k = 8.617333e-5;  // k_B * 1 K
  double piconewton_per_ev_nm = 160.21766;  // 1 eV/nm expressed in pN
  double coulomb_ev_nm = 1.43996454;        // e^2/(4 pi eps_0)
  double electron_mc2_ev = 510998.95;       // m_e c^2
};

// Values are fixed; the CASIMIR_CONSTANTS_FILE environment variable may point
// at a JSON override table (testing only).
const PhysicalConstants& constants();

// Derived conversion factors for the three output quantities.
double pn_from_ev_per_nm(double f);           // sphere-plate force
double un_per_m_from_ev_per_nm2(double g);    // force gradient
double mpa_from_ev_per_nm3(double p);         // effective pressure

}  // namespace casimir
