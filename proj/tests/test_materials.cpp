#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/materials.hpp"

using namespace casimir;
using namespace casimir::materials;

namespace {

struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (next() >> 11) * 0x1.0p-53;
  }
  bool coin() { return next() & 1; }
};

ResponseModel gold_modified() {
  ResponseModel m;
  m.drude = DrudeTerm{9.1, 0.06};
  m.modified = ModifiedOscillatorTerm{6.5, 5.9, 1.42};
  return m;
}

ResponseModel nickel_modified() {
  ResponseModel m;
  m.drude = DrudeTerm{4.33, 0.0195};
  m.modified = ModifiedOscillatorTerm{115.0, 0.61, 1.35};
  return m;
}

ResponseModel gold_drude_lorentz() {
  ResponseModel m;
  m.drude = DrudeTerm{9.1, 0.06};
  m.lorentz = {{2.2, 2.9, 0.7}, {1.4, 4.1, 1.1}};
  return m;
}

ResponseModel random_model(Rng& rng) {
  ResponseModel m;
  if (rng.coin()) m.drude = DrudeTerm{rng.uniform(1.0, 12.0), rng.uniform(0.0, 0.5)};
  int n_lorentz = int(rng.uniform(0.0, 3.999));
  for (int i = 0; i < n_lorentz; ++i)
    m.lorentz.push_back({rng.uniform(0.1, 8.0), rng.uniform(0.3, 20.0),
                         rng.uniform(0.0, 2.0)});
  if (rng.coin())
    m.modified = ModifiedOscillatorTerm{rng.uniform(0.5, 120.0),
                                        rng.uniform(0.3, 10.0),
                                        rng.uniform(0.2, 1.8)};
  if (m.empty() || rng.coin())
    m.ninham_parsegian = NinhamParsegianTerm{rng.uniform(0.1, 5.0),
                                             rng.uniform(0.01, 0.2),
                                             rng.uniform(0.1, 5.0),
                                             rng.uniform(1.0, 20.0)};
  return m;
}

}  // namespace

TEST_CASE("gold model hits the half-strength point of its interband term") {
  ResponseModel au = gold_modified();
  // At xi = omega_uv the fractional-power denominator is exactly 2.
  double expected = 1.0 + 9.1 * 9.1 / (5.9 * (5.9 + 0.06)) + 6.5 / 2.0;
  double got = eval_eps_imag(au, 5.9);
  CHECK(got == doctest::Approx(expected).epsilon(1e-14));
  CHECK(got == doctest::Approx(6.604965305426004).epsilon(1e-14));
}

TEST_CASE("nickel model evaluates to its defining arithmetic") {
  ResponseModel ni = nickel_modified();
  for (double xi : {0.05, 0.61, 3.7, 40.0}) {
    double expected = 1.0 + 4.33 * 4.33 / (xi * (xi + 0.0195)) +
                      115.0 / (1.0 + std::pow(xi / 0.61, 1.35));
    CHECK(eval_eps_imag(ni, xi) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("imaginary-axis permittivity rejects nonpositive frequency") {
  ResponseModel au = gold_modified();
  CHECK_THROWS_AS(eval_eps_imag(au, 0.0), DomainError);
  CHECK_THROWS_AS(eval_eps_imag(au, -1.5), DomainError);
  CHECK_THROWS_AS(eval_eps_imag(ResponseModel{}, 1.0), DomainError);
}

TEST_CASE("permittivity exceeds one and decreases monotonically in frequency") {
  Rng rng(20240817);
  for (int rep = 0; rep < 60; ++rep) {
    ResponseModel m = random_model(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 40; ++k) {
      double xi = 1e-3 * std::pow(10.0, 6.0 * k / 39.0);
      double eps = eval_eps_imag(m, xi);
      CHECK(eps > 1.0);
      CHECK(eps < prev);
      prev = eps;
    }
  }
}

TEST_CASE("high-frequency falloff carries the total oscillator strength") {
  ResponseModel m = gold_drude_lorentz();
  double strength = high_freq_strength(m);
  CHECK(strength == doctest::Approx(9.1 * 9.1 + 2.2 * 2.9 * 2.9 +
                                    1.4 * 4.1 * 4.1).epsilon(1e-14));
  double xi = 1e4 * 9.1;
  double lhs = xi * xi * (eval_eps_imag(m, xi) - 1.0);
  CHECK(lhs == doctest::Approx(strength).epsilon(1e-3));

  ResponseModel with_np = m;
  with_np.ninham_parsegian = NinhamParsegianTerm{2.0, 0.05, 1.5, 12.0};
  CHECK(high_freq_strength(with_np) ==
        doctest::Approx(strength + 2.0 * 0.05 * 0.05 + 1.5 * 12.0 * 12.0)
            .epsilon(1e-14));

  ResponseModel modified = gold_modified();
  CHECK_THROWS_AS(high_freq_strength(modified), UnsupportedModelError);
}

TEST_CASE("metallic low-frequency divergence matches the Drude pole exactly") {
  ResponseModel m = gold_drude_lorentz();
  ResponseModel core;
  core.lorentz = m.lorentz;
  for (double xi : {1e-4, 0.1, 5.0, 300.0}) {
    double diff = eval_eps_imag(m, xi) - eval_eps_imag(core, xi);
    CHECK(xi * (xi + 0.06) * diff == doctest::Approx(9.1 * 9.1).epsilon(1e-9));
  }
}

TEST_CASE("insulator static limit accumulates the term strengths") {
  ResponseModel m;
  m.ninham_parsegian = NinhamParsegianTerm{2.0, 0.05, 1.5, 12.0};
  m.lorentz = {{0.8, 4.0, 0.3}};
  CHECK(eps_static(m) == doctest::Approx(1.0 + 2.0 + 1.5 + 0.8).epsilon(1e-14));
  CHECK(eval_eps_imag(m, 1e-6) == doctest::Approx(eps_static(m)).epsilon(1e-4));

  ResponseModel metal = gold_modified();
  CHECK_THROWS_AS(eps_static(metal), DomainError);
}

TEST_CASE("undamped two-oscillator form approximates a weakly damped one") {
  double g = 3.0, w = 4.0, gamma = 4e-3;
  ResponseModel damped, undamped;
  damped.lorentz = {{g, w, gamma}};
  undamped.lorentz = {{g, w, 0.0}};
  for (double xi = 0.4; xi < 40.0; xi *= 1.5) {
    double full = eval_eps_imag(damped, xi) - 1.0;
    double np = eval_eps_imag(undamped, xi) - 1.0;
    CHECK(std::abs(full - np) <= gamma / xi * np);
  }
}

TEST_CASE("real-axis resonance of a damped oscillator is purely imaginary") {
  ResponseModel m;
  m.lorentz = {{1.3, 5.0, 0.4}};
  std::complex<double> eps = eval_eps_real_axis(m, 5.0);
  CHECK(eps.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eps.imag() == doctest::Approx(1.3 * 5.0 / 0.4).epsilon(1e-12));
}

TEST_CASE("real-axis response is passive and matches the strength asymptote") {
  ResponseModel m = gold_drude_lorentz();
  for (double w = 0.01; w < 1e3; w *= 1.7)
    CHECK(eval_eps_real_axis(m, w).imag() >= 0.0);

  double w = 1e4 * 9.1;
  std::complex<double> eps = eval_eps_real_axis(m, w);
  CHECK(w * w * (eps.real() - 1.0) ==
        doctest::Approx(-high_freq_strength(m)).epsilon(1e-3));

  // Drude loss decays as omega^-3 once omega >> gamma_0.
  ResponseModel drude_only;
  drude_only.drude = DrudeTerm{9.1, 0.06};
  double w2 = 60.0;
  double im = eval_eps_real_axis(drude_only, w2).imag();
  CHECK(im == doctest::Approx(9.1 * 9.1 * 0.06 / (w2 * w2 * w2)).epsilon(1e-5));
}

TEST_CASE("real-axis evaluation rejects what has no continuation there") {
  ResponseModel m;
  m.lorentz = {{1.0, 5.0, 0.0}};
  CHECK_THROWS_AS(eval_eps_real_axis(m, 5.0), DomainError);
  CHECK(eval_eps_real_axis(m, 4.0).real() > 1.0);

  CHECK_THROWS_AS(eval_eps_real_axis(gold_modified(), 1.0),
                  UnsupportedModelError);

  ResponseModel tab;
  tab.tabulated = KKTable{{1.0, 2.0}, {0.1, 0.2}, 3.0};
  CHECK_THROWS_AS(eval_eps_real_axis(tab, 1.0), UnsupportedModelError);
}

TEST_CASE("free-electron gas follows the inverse-square law") {
  FreeElectronParams p{0.059};
  const auto& c = constants();
  double c_fe = 4.0 * M_PI * p.n_density_nm3 * c.coulomb_ev_nm *
                c.hbar_c_ev_nm * c.hbar_c_ev_nm / c.electron_mc2_ev;
  double xi_star = std::sqrt(c_fe);
  CHECK(free_electron_eps(p, xi_star) == doctest::Approx(2.0).epsilon(1e-12));
  double d1 = free_electron_eps(p, 3.0) - 1.0;
  double d2 = free_electron_eps(p, 6.0) - 1.0;
  CHECK(d1 == 4.0 * d2);
  CHECK_THROWS_AS(free_electron_eps(p, 0.0), DomainError);
  CHECK_THROWS_AS(free_electron_eps(FreeElectronParams{-1.0}, 1.0), DomainError);
}

TEST_CASE("log-log slope identifies the falloff exponent of each family") {
  ResponseModel lorentz;
  lorentz.lorentz = {{1.2, 3.0, 0.4}};
  CHECK(asymptote_exponent(lorentz, 3e3, 3e5) == doctest::Approx(2.0).epsilon(5e-3));

  ResponseModel au_interband;
  au_interband.modified = ModifiedOscillatorTerm{6.5, 5.9, 1.42};
  CHECK(asymptote_exponent(au_interband, 1e3, 1e5) ==
        doctest::Approx(1.42).epsilon(5e-3));

  // A dissipationless Drude term is the free-electron gas; the slope is the
  // pure inverse-square law up to regression residual.
  ResponseModel plasma;
  plasma.drude = DrudeTerm{9.1, 0.0};
  CHECK(std::abs(asymptote_exponent(plasma, 1e3, 1e5) - 2.0) < 1e-8);

  ResponseModel vanishing;
  vanishing.lorentz = {{1e-300, 1.0, 0.0}};
  CHECK_THROWS_AS(asymptote_exponent(vanishing, 1e3, 1e5), NumericError);
}

TEST_CASE("nickel interband slope sits between the family exponents") {
  // The full nickel model keeps its conduction term; the fitted slope over
  // the diagnostic window still lands on the fractional exponent.
  CHECK(asymptote_exponent(nickel_modified(), 1e3, 1e5) ==
        doctest::Approx(1.35).epsilon(0.01));
}

TEST_CASE("dispersion transform of a zero table is exactly one") {
  KKTable t;
  t.omega_ev = {0.1, 1.0, 10.0, 100.0};
  t.im_eps = {0.0, 0.0, 0.0, 0.0};
  t.tail_exponent = 3.0;
  CHECK(kk_transform(t, 5.0) == 1.0);
  KKDetail d = kk_transform_detail(t, 5.0);
  CHECK(d.tail == 0.0);
  CHECK(d.below_min_bound == 0.0);
}

TEST_CASE("dispersion transform reproduces a sampled oscillator closed form") {
  double g = 1.0, w0 = 5.0, gamma = 0.5;
  KKTable t;
  t.tail_exponent = 3.0;
  int n = 400;
  for (int i = 0; i < n; ++i) {
    double w = 0.01 * std::pow(1e4 / 0.01, double(i) / (n - 1));
    double im = g * w0 * w0 * gamma * w /
                (std::pow(w0 * w0 - w * w, 2) + gamma * gamma * w * w);
    t.omega_ev.push_back(w);
    t.im_eps.push_back(im);
  }
  for (int k = 0; k < 30; ++k) {
    double xi = 0.1 * std::pow(1e3, double(k) / 29.0);
    double closed = 1.0 + g * w0 * w0 / (w0 * w0 + xi * xi + gamma * xi);
    CHECK(kk_transform(t, xi) == doctest::Approx(closed).epsilon(5e-3));
  }
}

TEST_CASE("dispersion transform round-trips the real-axis evaluation") {
  ResponseModel m = gold_drude_lorentz();
  KKTable t;
  t.tail_exponent = 3.0;
  int n = 800;
  for (int i = 0; i < n; ++i) {
    double w = 1e-5 * std::pow(1e4 / 1e-5, double(i) / (n - 1));
    t.omega_ev.push_back(w);
    t.im_eps.push_back(eval_eps_real_axis(m, w).imag());
  }
  for (int k = 0; k < 25; ++k) {
    double xi = 0.1 * std::pow(1e3, double(k) / 24.0);
    double direct = eval_eps_imag(m, xi);
    CHECK(kk_transform(t, xi) == doctest::Approx(direct).epsilon(5e-3));
  }
}

TEST_CASE("dispersion transform approaches the loss-moment limit") {
  double g = 1.0, w0 = 5.0, gamma = 0.5;
  KKTable t;
  t.tail_exponent = 3.0;
  int n = 500;
  for (int i = 0; i < n; ++i) {
    double w = 0.01 * std::pow(1e4 / 0.01, double(i) / (n - 1));
    double im = g * w0 * w0 * gamma * w /
                (std::pow(w0 * w0 - w * w, 2) + gamma * gamma * w * w);
    t.omega_ev.push_back(w);
    t.im_eps.push_back(im);
  }
  // (2/pi) Integral omega Im eps domega: trapezoid over the table plus the
  // analytic moment of the power-law tail.
  double moment = 0.0;
  for (int i = 0; i + 1 < n; ++i)
    moment += 0.5 * (t.omega_ev[i + 1] - t.omega_ev[i]) *
              (t.omega_ev[i] * t.im_eps[i] + t.omega_ev[i + 1] * t.im_eps[i + 1]);
  double wmax = t.omega_ev.back();
  double amp = t.im_eps.back() * std::pow(wmax, t.tail_exponent);
  moment += amp * std::pow(wmax, 2.0 - t.tail_exponent) / (t.tail_exponent - 2.0);
  moment *= 2.0 / M_PI;

  double xi = 1e6;
  CHECK(xi * xi * (kk_transform(t, xi) - 1.0) ==
        doctest::Approx(moment).epsilon(1e-3));
}

TEST_CASE("loss tables reject malformed input") {
  KKTable empty{{}, {}, 3.0};
  KKTable unsorted{{1.0, 1.0}, {0.1, 0.1}, 3.0};
  KKTable negative{{1.0, 2.0}, {0.1, -0.1}, 3.0};
  KKTable fat_tail{{1.0, 2.0}, {0.1, 0.1}, 1.0};
  KKTable good{{1.0, 2.0}, {0.1, 0.1}, 3.0};
  CHECK_THROWS_AS(empty.validate(), DomainError);
  CHECK_THROWS_AS(unsorted.validate(), DomainError);
  CHECK_THROWS_AS(negative.validate(), DomainError);
  CHECK_THROWS_AS(fat_tail.validate(), DomainError);
  CHECK_THROWS_AS(kk_transform(good, 0.0), DomainError);
}

TEST_CASE("model invariants are enforced at validation") {
  ResponseModel bad;
  bad.drude = DrudeTerm{-1.0, 0.06};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.drude = DrudeTerm{9.1, -0.1};
  CHECK_THROWS_AS(bad.validate(), DomainError);

  ResponseModel alpha_range;
  alpha_range.modified = ModifiedOscillatorTerm{6.5, 5.9, 2.0};
  CHECK_THROWS_AS(alpha_range.validate(), DomainError);
  alpha_range.modified->alpha = 0.0;
  CHECK_THROWS_AS(alpha_range.validate(), DomainError);

  ResponseModel np_order;
  np_order.ninham_parsegian = NinhamParsegianTerm{1.0, 12.0, 1.0, 0.05};
  CHECK_THROWS_AS(np_order.validate(), DomainError);

  MagneticModel mu{0.5};
  CHECK_THROWS_AS(mu.validate(), DomainError);
}
