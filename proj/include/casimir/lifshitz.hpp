#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casimir/materials.hpp"

namespace casimir::lifshitz {

// Thermal (Matsubara) frequencies xi_l = 2 pi k_B T l, in eV.
struct MatsubaraGrid {
  double temperature_k = 300.0;
  void validate() const;
  double xi(int l) const;
  // Dimensionless lower integration limit y_l = 2 a xi_l / (hbar c).
  double y_min(int l, double separation_nm) const;
};

// First `count` thermal frequencies as (l, xi_l) pairs.
std::vector<std::pair<int, double>> matsubara_terms(const MatsubaraGrid& grid,
                                                    int count);

// Sphere of radius R at closest distance a above a plate. The proximity
// force description used here needs a << R; past a/R = 0.01 results carry a
// warning flag but are still produced (corrections scale like a/R).
struct Geometry {
  double sphere_radius_nm = 0.0;
  double separation_nm = 0.0;
  void validate() const;
  double a_over_r() const { return separation_nm / sphere_radius_nm; }
  bool pfa_strained() const { return a_over_r() > 0.01; }
};

// How a surface reflects at the zero Matsubara frequency, where the generic
// formulas degenerate. Evaluating the dielectric model at xi -> 0 instead of
// branching here is wrong for metals and numerically explosive, hence the
// explicit classification.
enum class ZeroCharacter { DrudeMetal, PlasmaMetal, Insulator, Ideal };

// Everything the reflection coefficients need about one surface at one
// Matsubara index.
struct LayerResponse {
  ZeroCharacter zero_character = ZeroCharacter::Insulator;
  double eps = 1.0;         // eps(i xi_l), used for l >= 1
  double mu = 1.0;          // mu(i xi_l), used for l >= 1
  double eps_static = 1.0;  // insulator limit, used at l = 0
  double mu_static = 1.0;   // zero-frequency permeability, used at l = 0
  double omega_p_ev = 0.0;  // plasma frequency, used at l = 0 for plasma metals
};

struct ReflectionCoeffs {
  double tm = 0.0;
  double te = 0.0;
};

// Fresnel reflection at imaginary frequency xi_l in the dimensionless
// variable y = 2 a q_l >= y_l. At l = 0 the TM/TE pair is decided by the
// layer's zero character; an ideal surface reflects (1, -1) at every l.
ReflectionCoeffs reflection_coeffs(const LayerResponse& layer, int l, double y,
                                   double separation_nm, double xi_ev);

// One material assignment for one surface.
struct BodyMaterial {
  materials::ResponseModel model;  // ignored when ideal
  double mu_static = 1.0;
  bool ideal = false;
  std::string label;  // loader provenance, e.g. the file stem

  ZeroCharacter zero_character() const;
  LayerResponse layer(int l, double xi_ev) const;
  void validate() const;
};

enum class Quantity { Force, Gradient, Pressure };

struct SolverOptions {
  double quad_rel_tol = 1e-8;  // per-term frequency integral
  double tail_rel_tol = 1e-7;  // Matsubara truncation, relative to the sum
  std::optional<int> l_max;    // fixed truncation instead of adaptive
  int threads = 0;             // 0 = library default; 1 = serial reference
};

// Output units: Force pN, Gradient uN/m, Pressure mPa. The sign convention
// is attraction < 0 for the force; the gradient of an attractive force is
// positive and the equivalent parallel-plate pressure is negative.
struct ForceResult {
  Quantity quantity = Quantity::Force;
  double value = 0.0;
  std::vector<double> partial_sums;  // prefix sums over l, output units
  int truncation_l = 0;              // highest Matsubara index evaluated
  double tail_estimate = 0.0;        // bound on the discarded tail
  double quadrature_error = 0.0;     // accumulated absolute estimate
  double a_over_r = 0.0;
  bool pfa_warning = false;
};

ForceResult force_sphere_plate(const Geometry& g, const BodyMaterial& sphere,
                               const BodyMaterial& plate,
                               const MatsubaraGrid& grid,
                               const SolverOptions& opts = {});

// d|F|/da of the attractive force, reported positive for attraction
// weakening with distance.
ForceResult gradient_sphere_plate(const Geometry& g, const BodyMaterial& sphere,
                                  const BodyMaterial& plate,
                                  const MatsubaraGrid& grid,
                                  const SolverOptions& opts = {});

// Equivalent pressure between parallel plates, P = -F'(a) / (2 pi R).
ForceResult pressure_effective(const Geometry& g, const BodyMaterial& sphere,
                               const BodyMaterial& plate,
                               const MatsubaraGrid& grid,
                               const SolverOptions& opts = {});

// Dimensionless integrand of the Matsubara sum at one thermal index:
// Integral_{y_l}^inf y [ln(1 - r_TM^2 e^-y) + ln(1 - r_TE^2 e^-y)] dy for the
// force, the y^2 rational form for the gradient. Exposed for convergence
// studies and tests.
double matsubara_term(Quantity q, const BodyMaterial& sphere,
                      const BodyMaterial& plate, int l, double xi_ev,
                      double separation_nm, double quad_rel_tol,
                      double* quad_error = nullptr);

}  // namespace casimir::lifshitz
