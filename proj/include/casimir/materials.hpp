#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace casimir::materials {

// Dielectric response along the imaginary frequency axis, eps(i xi) with xi
// in eV. Models are sums of the terms below; each term contributes
// eps(i xi) - 1 and every contribution is positive for xi > 0, so eps > 1
// everywhere it is defined.

// g_j / (1 + (xi/omega_j)^2 + gamma_j xi / omega_j^2)
struct LorentzTerm {
  double g_j = 0.0;      // dimensionless strength
  double omega_j = 0.0;  // resonance, eV
  double gamma_j = 0.0;  // damping, eV (0 for an undamped core term)
};

// omega_p^2 / (xi (xi + gamma_0)); gamma_0 = 0 selects the dissipationless
// plasma form, which changes the zero-frequency TE channel qualitatively.
struct DrudeTerm {
  double omega_p = 0.0;  // plasma frequency, eV
  double gamma_0 = 0.0;  // relaxation rate, eV
};

// g_uv / (1 + (xi/omega_uv)^alpha): fractional-power interband tail with
// 0 < alpha < 2. Defined on the imaginary axis only.
struct ModifiedOscillatorTerm {
  double g_uv = 0.0;
  double omega_uv = 0.0;  // eV
  double alpha = 0.0;
};

// Two undamped oscillators (IR + UV), the classic dispersion-force input for
// insulators.
struct NinhamParsegianTerm {
  double g_ir = 0.0;
  double omega_ir = 0.0;  // eV
  double g_uv = 0.0;
  double omega_uv = 0.0;  // eV
};

// Tabulated Im eps(omega) on the real axis, ascending omega in eV. Outside
// the table, Im eps is taken as zero below omega.front() and as a power-law
// tail ~ omega^(-tail_exponent) above omega.back().
struct KKTable {
  std::vector<double> omega_ev;
  std::vector<double> im_eps;
  double tail_exponent = 3.0;  // must exceed 1 for an integrable tail
  void validate() const;
};

struct ResponseModel {
  std::optional<DrudeTerm> drude;
  std::vector<LorentzTerm> lorentz;
  std::optional<ModifiedOscillatorTerm> modified;
  std::optional<NinhamParsegianTerm> ninham_parsegian;
  std::optional<KKTable> tabulated;

  // Metallic response diverges as xi -> 0; this drives the zero-frequency
  // treatment in the reflection coefficients.
  bool metallic() const { return drude.has_value(); }
  bool empty() const;
  void validate() const;
};

// Permeability contract: mu(i xi_0) = mu_static at the zero Matsubara
// frequency only, mu(i xi_l) = 1 for l >= 1. Captures ferromagnets whose
// magnetic response is dead above the first thermal frequency.
struct MagneticModel {
  double mu_static = 1.0;
  void validate() const;
};

// Ideal free-electron gas: eps(i xi) = 1 + 4 pi N e^2 / (m xi^2) with the
// carrier density in nm^-3.
struct FreeElectronParams {
  double n_density_nm3 = 0.0;
};

// eps(i xi) for xi > 0 (eV). Throws DomainError for xi <= 0; metallic models
// diverge there and insulators must go through eps_static instead.
double eval_eps_imag(const ResponseModel& m, double xi_ev);

// Limit of eps(i xi) as xi -> 0+ for non-metallic models.
double eps_static(const ResponseModel& m);

// Complex permittivity on the real frequency axis. Only Drude, damped
// Lorentz and Ninham-Parsegian terms continue there; a model containing a
// fractional-power or tabulated part raises UnsupportedModelError.
std::complex<double> eval_eps_real_axis(const ResponseModel& m, double omega_ev);

// Spectral weight omega_p^2 + sum_j g_j omega_j^2 governing the universal
// xi^-2 falloff of eps - 1 at high frequency. Defined for Drude/Lorentz/
// Ninham-Parsegian content only.
double high_freq_strength(const ResponseModel& m);

double free_electron_eps(const FreeElectronParams& p, double xi_ev);

// Kramers-Kronig transform of a tabulated loss spectrum:
//   eps(i xi) = 1 + (2/pi) Integral omega Im eps(omega) / (omega^2 + xi^2)
// Trapezoid over the table plus the analytic power-law tail.
double kk_transform(const KKTable& t, double xi_ev);

struct KKDetail {
  double eps = 1.0;
  double tail = 0.0;             // contribution from beyond the table
  double below_min_bound = 0.0;  // bound on the neglected [0, omega_min) part
};
KKDetail kk_transform_detail(const KKTable& t, double xi_ev);

// Local power-law exponent of eps(i xi) - 1: minus the log-log slope fitted
// over a geometric grid spanning [xi_lo, xi_hi].
double asymptote_exponent(const ResponseModel& m, double xi_lo, double xi_hi,
                          int points = 64);

}  // namespace casimir::materials
