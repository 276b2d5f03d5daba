#include "casimir/lifshitz.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"

namespace casimir::lifshitz {

void MatsubaraGrid::validate() const {
  if (!(temperature_k > 0.0)) throw DomainError("temperature must be positive");
}

double MatsubaraGrid::xi(int l) const {
  if (l < 0) throw DomainError("Matsubara index must be nonnegative");
  return 2.0 * M_PI * constants().boltzmann_ev_per_k * temperature_k * l;
}

double MatsubaraGrid::y_min(int l, double separation_nm) const {
  return 2.0 * separation_nm * xi(l) / constants().hbar_c_ev_nm;
}

std::vector<std::pair<int, double>> matsubara_terms(const MatsubaraGrid& grid,
                                                    int count) {
  grid.validate();
  if (count < 1) throw DomainError("matsubara_terms needs count >= 1");
  std::vector<std::pair<int, double>> out;
  out.reserve(size_t(count));
  for (int l = 0; l < count; ++l) out.emplace_back(l, grid.xi(l));
  return out;
}

void Geometry::validate() const {
  if (!(sphere_radius_nm > 0.0))
    throw GeometryError("sphere radius must be positive");
  if (!(separation_nm > 0.0))
    throw GeometryError("separation must be positive");
}

void BodyMaterial::validate() const {
  materials::MagneticModel{mu_static}.validate();
  if (!ideal) model.validate();
}

ZeroCharacter BodyMaterial::zero_character() const {
  if (ideal) return ZeroCharacter::Ideal;
  if (model.metallic())
    return model.drude->gamma_0 == 0.0 ? ZeroCharacter::PlasmaMetal
                                       : ZeroCharacter::DrudeMetal;
  return ZeroCharacter::Insulator;
}

LayerResponse BodyMaterial::layer(int l, double xi_ev) const {
  validate();
  LayerResponse out;
  out.zero_character = zero_character();
  out.mu_static = mu_static;
  if (l == 0) {
    if (out.zero_character == ZeroCharacter::Insulator)
      out.eps_static = materials::eps_static(model);
    if (out.zero_character == ZeroCharacter::PlasmaMetal)
      out.omega_p_ev = model.drude->omega_p;
    return out;
  }
  if (!ideal) out.eps = materials::eval_eps_imag(model, xi_ev);
  out.mu = 1.0;  // permeability contract: magnetic response dies above l = 0
  return out;
}

ReflectionCoeffs reflection_coeffs(const LayerResponse& layer, int l, double y,
                                   double separation_nm, double xi_ev) {
  if (layer.zero_character == ZeroCharacter::Ideal) return {1.0, -1.0};
  if (l == 0) {
    if (!(y >= 0.0)) throw DomainError("reflection: y must be nonnegative at l = 0");
    double mu0 = layer.mu_static;
    double r_mag = (mu0 - 1.0) / (mu0 + 1.0);
    switch (layer.zero_character) {
      case ZeroCharacter::DrudeMetal:
        // eps ~ 1/xi: TM saturates at 1, TE keeps only the magnetic part.
        return {1.0, r_mag};
      case ZeroCharacter::PlasmaMetal: {
        // eps ~ omega_p^2/xi^2 leaves a finite TE reflection.
        double wp = 2.0 * separation_nm * layer.omega_p_ev /
                    constants().hbar_c_ev_nm;
        double k = std::sqrt(y * y + mu0 * wp * wp);
        return {1.0, (mu0 * y - k) / (mu0 * y + k)};
      }
      case ZeroCharacter::Insulator: {
        double e0 = layer.eps_static;
        return {(e0 - 1.0) / (e0 + 1.0), r_mag};
      }
      case ZeroCharacter::Ideal:
        break;  // handled above
    }
  }
  double beta = 2.0 * separation_nm * xi_ev / constants().hbar_c_ev_nm;
  if (!(y >= beta * (1.0 - 1e-12)))
    throw DomainError("reflection: y below the propagation threshold");
  double e = layer.eps;
  double mu = layer.mu;
  double k = std::sqrt(y * y + (e * mu - 1.0) * beta * beta);
  return {(e * y - k) / (e * y + k), (mu * y - k) / (mu * y + k)};
}

namespace {

// 1 - c e^-y without cancellation; c = 1 exactly for the perfectly
// reflecting channels, where the difference degenerates to 1 - e^-y.
double one_minus_prod(double c, double y) {
  if (c == 1.0) return -std::expm1(-y);
  return 1.0 - c * std::exp(-y);
}

// log(1 - c e^-y) keeping full relative precision in both corners: the
// rounded 1 - x quantizes the far tail into steps of ~y*eps that a small
// absolute quadrature tolerance would otherwise chase, so the small-x side
// goes through log1p; the c = 1, small-y side needs expm1 for 1 - e^-y.
double log_one_minus_prod(double c, double y) {
  if (c == 1.0 && y < 1.0) return std::log(-std::expm1(-y));
  return std::log1p(-c * std::exp(-y));
}

double force_integrand(double ctm, double cte, double y) {
  return y * (log_one_minus_prod(ctm, y) + log_one_minus_prod(cte, y));
}

double gradient_integrand(double ctm, double cte, double y) {
  double e = std::exp(-y);
  return y * y * (ctm * e / one_minus_prod(ctm, y) + cte * e / one_minus_prod(cte, y));
}

// Beyond y = ymin + kYSpan the integrand is below ~e^-60 of its scale;
// (y^2 + 2y + 2) e^-y bounds the discarded piece for both integrand forms.
constexpr double kYSpan = 60.0;

}  // namespace

double matsubara_term(Quantity q, const BodyMaterial& sphere,
                      const BodyMaterial& plate, int l, double xi_ev,
                      double separation_nm, double quad_rel_tol,
                      double* quad_error) {
  LayerResponse l1 = sphere.layer(l, xi_ev);
  LayerResponse l2 = plate.layer(l, xi_ev);
  double ymin = l == 0 ? 0.0
                       : 2.0 * separation_nm * xi_ev / constants().hbar_c_ev_nm;
  bool force_form = (q == Quantity::Force);

  auto f = [&](double y) {
    if (y == 0.0) return 0.0;  // y ln y -> 0 and y^2/(1 - e^-y) -> y -> 0
    ReflectionCoeffs r1 = reflection_coeffs(l1, l, y, separation_nm, xi_ev);
    ReflectionCoeffs r2 = reflection_coeffs(l2, l, y, separation_nm, xi_ev);
    double ctm = r1.tm * r2.tm;
    double cte = r1.te * r2.te;
    return force_form ? force_integrand(ctm, cte, y)
                      : gradient_integrand(ctm, cte, y);
  };

  num::QuadratureResult qr;
  try {
    qr = num::integrate_adaptive(f, ymin, ymin + kYSpan, quad_rel_tol);
  } catch (const NumericError& e) {
    throw NumericError("Matsubara term l=" + std::to_string(l) + ": " + e.what());
  }
  if (quad_error) {
    double yc = ymin + kYSpan;
    *quad_error = qr.error_estimate +
                  2.0 * (yc * yc + 2.0 * yc + 2.0) * std::exp(-yc);
  }
  return qr.value;
}

namespace {

struct RawSum {
  std::vector<double> weighted;  // I_l with the l = 0 term halved
  double value = 0.0;            // pairwise sum of `weighted`
  double quad_error = 0.0;
  double tail = 0.0;  // geometric bound on the discarded remainder
  int truncation_l = 0;
};

// Evaluates the thermal sum with either the force or the gradient integrand.
// Terms are computed in blocks (optionally in parallel), appended in
// l-ascending order and combined by pairwise summation, so the result does
// not depend on the worker count.
RawSum sum_matsubara(Quantity q, const Geometry& g, const BodyMaterial& sphere,
                     const BodyMaterial& plate, const MatsubaraGrid& grid,
                     const SolverOptions& opts) {
  g.validate();
  grid.validate();
  sphere.validate();
  plate.validate();
  if (opts.l_max && *opts.l_max < 0)
    throw DomainError("l_max must be nonnegative");
  if (!(opts.quad_rel_tol > 0.0) || !(opts.tail_rel_tol > 0.0))
    throw DomainError("solver tolerances must be positive");

  const int kBlock = 16;
  const int kHardCap = 400000;
  RawSum out;
  std::vector<double> block_vals(kBlock), block_errs(kBlock);
  int growth_strikes = 0;

  int next_l = 0;
  while (true) {
    int count = kBlock;
    if (opts.l_max) count = std::min(count, *opts.l_max + 1 - next_l);
    if (count <= 0) break;

    std::exception_ptr failure = nullptr;
#ifdef _OPENMP
    bool serial = opts.threads == 1;
#else
    bool serial = true;
#endif
    if (serial) {
      for (int i = 0; i < count; ++i) {
        int l = next_l + i;
        block_vals[i] = matsubara_term(q, sphere, plate, l, grid.xi(l),
                                       g.separation_nm, opts.quad_rel_tol,
                                       &block_errs[i]);
      }
    } else {
#ifdef _OPENMP
      int nthreads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads)
      for (int i = 0; i < count; ++i) {
        try {
          int l = next_l + i;
          block_vals[i] = matsubara_term(q, sphere, plate, l, grid.xi(l),
                                         g.separation_nm, opts.quad_rel_tol,
                                         &block_errs[i]);
        } catch (...) {
#pragma omp critical
          if (!failure) failure = std::current_exception();
        }
      }
#endif
    }
    if (failure) std::rethrow_exception(failure);

    for (int i = 0; i < count; ++i) {
      int l = next_l + i;
      out.weighted.push_back((l == 0 ? 0.5 : 1.0) * block_vals[i]);
      out.quad_error += block_errs[i];
    }
    next_l += count;
    out.truncation_l = next_l - 1;

    size_t n = out.weighted.size();
    double last = std::abs(out.weighted[n - 1]);
    double prev = n >= 2 ? std::abs(out.weighted[n - 2]) : 0.0;
    if (last == 0.0) {
      out.tail = 0.0;
      if (!opts.l_max) break;
    } else if (prev > 0.0) {
      double rho = last / prev;
      // Terms may legitimately grow while the TE channel switches on at low
      // temperature; growth past the exponential cutoff means the response
      // model feeds the integrand garbage.
      if (rho >= 1.0) {
        if (grid.y_min(next_l - 1, g.separation_nm) > 2.0 &&
            ++growth_strikes >= 3)
          throw NumericError(
              "Matsubara tail not decaying; check the response model");
      } else {
        growth_strikes = 0;
      }
      rho = std::min(rho, 0.99999);
      out.tail = last * rho / (1.0 - rho);
    }

    if (opts.l_max) {
      if (next_l > *opts.l_max) break;
      continue;
    }
    double running = std::abs(num::pairwise_sum(out.weighted));
    if (n >= 2 && out.tail <= opts.tail_rel_tol * running && running > 0.0) break;
    if (next_l > kHardCap)
      throw NumericError("Matsubara sum exceeded the term budget without converging");
  }

  out.value = num::pairwise_sum(out.weighted);
  return out;
}

// Shared assembly: scale the dimensionless sum into output units and build
// the per-l running breakdown.
ForceResult assemble(Quantity q, const Geometry& g, const RawSum& raw,
                     double prefactor_ev, double (*convert)(double)) {
  ForceResult out;
  out.quantity = q;
  out.value = convert(prefactor_ev * raw.value);
  out.partial_sums.reserve(raw.weighted.size());
  double acc = 0.0;
  for (double w : raw.weighted) {
    acc += w;
    out.partial_sums.push_back(convert(prefactor_ev * acc));
  }
  out.truncation_l = raw.truncation_l;
  out.tail_estimate = std::abs(convert(prefactor_ev * raw.tail));
  out.quadrature_error = std::abs(convert(prefactor_ev * raw.quad_error));
  out.a_over_r = g.a_over_r();
  out.pfa_warning = g.pfa_strained();
  return out;
}

}  // namespace

ForceResult force_sphere_plate(const Geometry& g, const BodyMaterial& sphere,
                               const BodyMaterial& plate,
                               const MatsubaraGrid& grid,
                               const SolverOptions& opts) {
  RawSum raw = sum_matsubara(Quantity::Force, g, sphere, plate, grid, opts);
  double kt = constants().boltzmann_ev_per_k * grid.temperature_k;
  double pref = kt * g.sphere_radius_nm /
                (4.0 * g.separation_nm * g.separation_nm);
  return assemble(Quantity::Force, g, raw, pref, &pn_from_ev_per_nm);
}

ForceResult gradient_sphere_plate(const Geometry& g, const BodyMaterial& sphere,
                                  const BodyMaterial& plate,
                                  const MatsubaraGrid& grid,
                                  const SolverOptions& opts) {
  RawSum raw = sum_matsubara(Quantity::Gradient, g, sphere, plate, grid, opts);
  double kt = constants().boltzmann_ev_per_k * grid.temperature_k;
  double a = g.separation_nm;
  double pref = kt * g.sphere_radius_nm / (4.0 * a * a * a);
  return assemble(Quantity::Gradient, g, raw, pref, &un_per_m_from_ev_per_nm2);
}

ForceResult pressure_effective(const Geometry& g, const BodyMaterial& sphere,
                               const BodyMaterial& plate,
                               const MatsubaraGrid& grid,
                               const SolverOptions& opts) {
  RawSum raw = sum_matsubara(Quantity::Gradient, g, sphere, plate, grid, opts);
  double kt = constants().boltzmann_ev_per_k * grid.temperature_k;
  double a = g.separation_nm;
  // P = -F'(a) / (2 pi R): the proximity construction in reverse.
  double pref = -kt / (8.0 * M_PI * a * a * a);
  return assemble(Quantity::Pressure, g, raw, pref, &mpa_from_ev_per_nm3);
}

}  // namespace casimir::lifshitz
