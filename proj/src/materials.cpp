#include "casimir/materials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"

namespace casimir::materials {

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

void check_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw DomainError(std::string(what) + " must be nonnegative");
}

}  // namespace

void KKTable::validate() const {
  if (omega_ev.empty()) throw DomainError("loss table is empty");
  if (omega_ev.size() != im_eps.size())
    throw DomainError("loss table: frequency and loss columns differ in length");
  if (!(tail_exponent > 1.0))
    throw DomainError("loss table: tail exponent must exceed 1 for an integrable tail");
  double prev = 0.0;
  for (size_t i = 0; i < omega_ev.size(); ++i) {
    if (!(omega_ev[i] > prev))
      throw DomainError("loss table: frequencies must be positive and strictly ascending");
    if (!(im_eps[i] >= 0.0)) throw DomainError("loss table: Im eps must be nonnegative");
    prev = omega_ev[i];
  }
}

bool ResponseModel::empty() const {
  return !drude && lorentz.empty() && !modified && !ninham_parsegian && !tabulated;
}

void ResponseModel::validate() const {
  if (empty()) throw DomainError("response model has no terms");
  if (drude) {
    check_positive(drude->omega_p, "plasma frequency");
    check_nonnegative(drude->gamma_0, "relaxation rate");
  }
  for (const auto& t : lorentz) {
    check_positive(t.g_j, "oscillator strength");
    check_positive(t.omega_j, "resonance frequency");
    check_nonnegative(t.gamma_j, "oscillator damping");
  }
  if (modified) {
    check_positive(modified->g_uv, "interband strength");
    check_positive(modified->omega_uv, "interband frequency");
    if (!(modified->alpha > 0.0) || !(modified->alpha < 2.0))
      throw DomainError("fractional exponent must lie in (0, 2)");
  }
  if (ninham_parsegian) {
    check_positive(ninham_parsegian->g_ir, "IR strength");
    check_positive(ninham_parsegian->omega_ir, "IR frequency");
    check_positive(ninham_parsegian->g_uv, "UV strength");
    check_positive(ninham_parsegian->omega_uv, "UV frequency");
    if (!(ninham_parsegian->omega_ir < ninham_parsegian->omega_uv))
      throw DomainError("IR frequency must lie below the UV frequency");
  }
  if (tabulated) tabulated->validate();
}

void MagneticModel::validate() const {
  if (!(mu_static >= 1.0)) throw DomainError("static permeability must be >= 1");
}

namespace {

double lorentz_imag(const LorentzTerm& t, double xi) {
  double u = xi / t.omega_j;
  return t.g_j / (1.0 + u * u + t.gamma_j * xi / (t.omega_j * t.omega_j));
}

double modified_imag(const ModifiedOscillatorTerm& t, double xi) {
  return t.g_uv / (1.0 + std::pow(xi / t.omega_uv, t.alpha));
}

double np_imag(const NinhamParsegianTerm& t, double xi) {
  double uir = xi / t.omega_ir;
  double uuv = xi / t.omega_uv;
  return t.g_ir / (1.0 + uir * uir) + t.g_uv / (1.0 + uuv * uuv);
}

}  // namespace

double eval_eps_imag(const ResponseModel& m, double xi_ev) {
  m.validate();
  if (!(xi_ev > 0.0))
    throw DomainError("imaginary-axis permittivity needs xi > 0");
  double eps = 1.0;
  if (m.drude)
    eps += m.drude->omega_p * m.drude->omega_p /
           (xi_ev * (xi_ev + m.drude->gamma_0));
  for (const auto& t : m.lorentz) eps += lorentz_imag(t, xi_ev);
  if (m.modified) eps += modified_imag(*m.modified, xi_ev);
  if (m.ninham_parsegian) eps += np_imag(*m.ninham_parsegian, xi_ev);
  if (m.tabulated) eps += kk_transform(*m.tabulated, xi_ev) - 1.0;
  return eps;
}

double eps_static(const ResponseModel& m) {
  m.validate();
  if (m.metallic())
    throw DomainError("static permittivity of a metallic model diverges");
  double eps = 1.0;
  for (const auto& t : m.lorentz) eps += t.g_j;
  if (m.modified) eps += m.modified->g_uv;
  if (m.ninham_parsegian)
    eps += m.ninham_parsegian->g_ir + m.ninham_parsegian->g_uv;
  if (m.tabulated) {
    // xi -> 0 limit of the dispersion integral; the table is cut off below
    // omega.front(), so the integrand (Im eps / omega) stays bounded.
    KKDetail d = kk_transform_detail(*m.tabulated, 0.0);
    eps += d.eps - 1.0;
  }
  return eps;
}

std::complex<double> eval_eps_real_axis(const ResponseModel& m, double omega_ev) {
  m.validate();
  if (!(omega_ev > 0.0))
    throw DomainError("real-axis permittivity needs omega > 0");
  if (m.modified)
    throw UnsupportedModelError(
        "fractional-power term has no real-axis continuation");
  if (m.tabulated)
    throw UnsupportedModelError(
        "tabulated loss model is not evaluated on the real axis");
  std::complex<double> eps(1.0, 0.0);
  const std::complex<double> i_unit(0.0, 1.0);
  if (m.drude) {
    // -omega_p^2 / (omega (omega + i gamma_0)); gamma_0 = 0 is fine away
    // from omega = 0.
    eps -= m.drude->omega_p * m.drude->omega_p /
           (omega_ev * (omega_ev + i_unit * m.drude->gamma_0));
  }
  auto add_lorentz = [&](double g, double w, double gamma) {
    double u = omega_ev / w;
    std::complex<double> den(1.0 - u * u, -gamma * omega_ev / (w * w));
    if (std::abs(den) == 0.0)
      throw DomainError("real-axis evaluation at an undamped resonance");
    eps += g / den;
  };
  for (const auto& t : m.lorentz) add_lorentz(t.g_j, t.omega_j, t.gamma_j);
  if (m.ninham_parsegian) {
    add_lorentz(m.ninham_parsegian->g_ir, m.ninham_parsegian->omega_ir, 0.0);
    add_lorentz(m.ninham_parsegian->g_uv, m.ninham_parsegian->omega_uv, 0.0);
  }
  return eps;
}

double high_freq_strength(const ResponseModel& m) {
  m.validate();
  if (m.modified)
    throw UnsupportedModelError(
        "fractional-power term has no finite xi^-2 spectral weight");
  if (m.tabulated)
    throw UnsupportedModelError(
        "tabulated model: high-frequency weight not defined");
  double s = 0.0;
  if (m.drude) s += m.drude->omega_p * m.drude->omega_p;
  for (const auto& t : m.lorentz) s += t.g_j * t.omega_j * t.omega_j;
  if (m.ninham_parsegian) {
    s += m.ninham_parsegian->g_ir * m.ninham_parsegian->omega_ir *
         m.ninham_parsegian->omega_ir;
    s += m.ninham_parsegian->g_uv * m.ninham_parsegian->omega_uv *
         m.ninham_parsegian->omega_uv;
  }
  return s;
}

double free_electron_eps(const FreeElectronParams& p, double xi_ev) {
  if (!(p.n_density_nm3 > 0.0)) throw DomainError("carrier density must be positive");
  if (!(xi_ev > 0.0)) throw DomainError("free-electron permittivity needs xi > 0");
  const auto& c = constants();
  // 4 pi N e^2 / m_e in eV^2: e^2 = coulomb constant [eV nm], and
  // 1/m_e = (hbar c)^2 / (m_e c^2) in eV nm^2.
  double wp2 = 4.0 * M_PI * p.n_density_nm3 * c.coulomb_ev_nm *
               c.hbar_c_ev_nm * c.hbar_c_ev_nm / c.electron_mc2_ev;
  return 1.0 + wp2 / (xi_ev * xi_ev);
}

namespace {

// Tail integral (2/pi) Im eps_N Integral_{omega_N}^inf
// (omega_N/omega)^s omega/(omega^2+xi^2) domega
//   = (2/pi) Im eps_N Integral_0^1 t^(s-1) / (1 + r^2 t^2) dt,  r = xi/omega_N,
// via t = omega_N/omega. Alternating series in r^2 when it converges fast,
// otherwise direct quadrature of the transformed integrand (smooth on [0,1]).
double tail_integral(double im_eps_n, double s, double r) {
  if (im_eps_n == 0.0) return 0.0;
  double r2 = r * r;
  if (r2 < 0.5) {
    double sum = 0.0;
    double pow_r = 1.0;
    for (int k = 0; k < 200; ++k) {
      double term = pow_r / (s + 2.0 * k);
      sum += (k % 2 == 0) ? term : -term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
      pow_r *= r2;
    }
    return 2.0 / M_PI * im_eps_n * sum;
  }
  auto f = [s, r2](double t) {
    return std::pow(t, s - 1.0) / (1.0 + r2 * t * t);
  };
  return 2.0 / M_PI * im_eps_n * num::integrate_adaptive(f, 0.0, 1.0, 1e-12).value;
}

}  // namespace

double kk_transform(const KKTable& t, double xi_ev) {
  if (!(xi_ev > 0.0)) throw DomainError("dispersion transform needs xi > 0");
  return kk_transform_detail(t, xi_ev).eps;
}

KKDetail kk_transform_detail(const KKTable& t, double xi_ev) {
  t.validate();
  if (!(xi_ev >= 0.0)) throw DomainError("dispersion transform needs xi >= 0");
  const auto& w = t.omega_ev;
  const auto& g = t.im_eps;
  double xi2 = xi_ev * xi_ev;
  // Composite trapezoid on the tabulated nodes; the kernel is smooth for
  // xi >= 0 because omega >= omega.front() > 0.
  double integral = 0.0;
  auto kernel = [xi2](double omega, double im) {
    return omega * im / (omega * omega + xi2);
  };
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    integral += 0.5 * (w[i + 1] - w[i]) *
                (kernel(w[i], g[i]) + kernel(w[i + 1], g[i + 1]));
  }
  KKDetail out;
  out.tail = tail_integral(g.back(), t.tail_exponent, xi_ev / w.back());
  // Below the table Im eps is taken as zero; bound the omission by assuming
  // the loss held its edge value down to omega = 0.
  out.below_min_bound =
      2.0 / M_PI * g.front() *
      (xi_ev == 0.0 ? M_PI / 2.0 : std::atan(w.front() / xi_ev));
  out.eps = 1.0 + 2.0 / M_PI * integral + out.tail;
  return out;
}

double asymptote_exponent(const ResponseModel& m, double xi_lo, double xi_hi,
                          int points) {
  if (!(xi_lo > 0.0) || !(xi_hi > xi_lo))
    throw DomainError("asymptote window needs 0 < xi_lo < xi_hi");
  if (points < 32) points = 32;
  std::vector<double> lx(points), ly(points);
  double ratio = std::log(xi_hi / xi_lo);
  for (int i = 0; i < points; ++i) {
    double xi = xi_lo * std::exp(ratio * i / double(points - 1));
    double chi = eval_eps_imag(m, xi) - 1.0;
    if (!(chi > std::numeric_limits<double>::min()))
      throw NumericError("asymptote fit: eps - 1 underflowed on the window");
    lx[i] = std::log(xi);
    ly[i] = std::log(chi);
  }
  return -num::fit_line(lx, ly).slope;
}

}  // namespace casimir::materials
