#include "casimir/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir::materials {

ModelFamily family_from_string(std::string_view name) {
  if (name == "lorentz") return ModelFamily::Lorentz;
  if (name == "modified") return ModelFamily::Modified;
  if (name == "ninham_parsegian") return ModelFamily::NinhamParsegian;
  throw ParseError("unknown fit family: " + std::string(name));
}

std::string_view family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::Lorentz: return "lorentz";
    case ModelFamily::Modified: return "modified";
    case ModelFamily::NinhamParsegian: return "ninham_parsegian";
  }
  return "";
}

int family_parameter_count(ModelFamily f, int lorentz_terms) {
  switch (f) {
    case ModelFamily::Lorentz: return 3 * lorentz_terms;
    case ModelFamily::Modified: return 3;
    case ModelFamily::NinhamParsegian: return 4;
  }
  return 0;
}

namespace {

double clamp_exp(double t) { return std::exp(std::clamp(t, -700.0, 700.0)); }

// Internal coordinates are unconstrained: positive parameters travel through
// log, the fractional exponent through a logistic onto (0, 2).
double to_internal_positive(double p) { return std::log(p); }
double to_internal_alpha(double a) { return std::log(a / (2.0 - a)); }
double from_internal_alpha(double t) { return 2.0 / (1.0 + clamp_exp(-t)); }

ResponseModel decode(ModelFamily family, int lorentz_terms,
                     const std::vector<double>& t) {
  ResponseModel m;
  switch (family) {
    case ModelFamily::Lorentz:
      for (int k = 0; k < lorentz_terms; ++k) {
        LorentzTerm lt;
        lt.g_j = clamp_exp(t[3 * k]);
        lt.omega_j = clamp_exp(t[3 * k + 1]);
        lt.gamma_j = clamp_exp(t[3 * k + 2]);
        m.lorentz.push_back(lt);
      }
      break;
    case ModelFamily::Modified: {
      ModifiedOscillatorTerm mo;
      mo.g_uv = clamp_exp(t[0]);
      mo.omega_uv = clamp_exp(t[1]);
      mo.alpha = from_internal_alpha(t[2]);
      m.modified = mo;
      break;
    }
    case ModelFamily::NinhamParsegian: {
      NinhamParsegianTerm np;
      np.g_ir = clamp_exp(t[0]);
      np.omega_ir = clamp_exp(t[1]);
      np.g_uv = clamp_exp(t[2]);
      np.omega_uv = clamp_exp(t[3]);
      // The two-oscillator sum is symmetric under exchanging its terms, so
      // the IR < UV ordering can be restored instead of rejected.
      if (np.omega_ir > np.omega_uv) {
        std::swap(np.g_ir, np.g_uv);
        std::swap(np.omega_ir, np.omega_uv);
      }
      if (!(np.omega_ir < np.omega_uv)) np.omega_uv = np.omega_ir * (1.0 + 1e-9);
      m.ninham_parsegian = np;
      break;
    }
  }
  return m;
}

std::vector<double> encode(ModelFamily family,
                           std::span<const double> natural) {
  std::vector<double> t(natural.size());
  for (size_t i = 0; i < natural.size(); ++i) {
    bool is_alpha = (family == ModelFamily::Modified && i == 2);
    if (is_alpha) {
      if (!(natural[i] > 0.0) || !(natural[i] < 2.0))
        throw DomainError("initial fractional exponent must lie in (0, 2)");
      t[i] = to_internal_alpha(natural[i]);
    } else {
      if (!(natural[i] > 0.0))
        throw DomainError("initial fit parameters must be positive");
      t[i] = to_internal_positive(natural[i]);
    }
  }
  return t;
}

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> f;
};

}  // namespace

FitResult fit_oscillator(std::span<const std::pair<double, double>> samples,
                         ModelFamily family, std::span<const double> initial,
                         const FitOptions& opts) {
  int lorentz_terms = std::max(1, opts.lorentz_terms);
  size_t n = size_t(family_parameter_count(family, lorentz_terms));
  if (initial.size() != n)
    throw DomainError("fit: initial guess has wrong parameter count");
  if (samples.size() < 2 * n)
    throw DomainError("fit needs at least twice as many samples as parameters");
  std::vector<double> log_target(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].first > 0.0))
      throw DomainError("fit samples need xi > 0");
    if (!(samples[i].second > 1.0))
      throw DomainError("fit samples need eps > 1");
    log_target[i] = std::log(samples[i].second - 1.0);
  }

  auto objective = [&](const std::vector<double>& t) {
    ResponseModel m = decode(family, lorentz_terms, t);
    double s = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
      double chi = eval_eps_imag(m, samples[i].first) - 1.0;
      double r = std::log(std::max(chi, 1e-300)) - log_target[i];
      s += r * r;
    }
    return s;
  };

  std::vector<double> best = encode(family, initial);
  double best_f = objective(best);
  int iterations = 0;
  bool converged = false;

  const double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  const double kFTol = 1e-15, kXTol = 1e-12;

  double step = 0.25;
  for (int run = 0; run <= opts.restarts; ++run) {
    Simplex s;
    s.x.assign(n + 1, best);
    for (size_t j = 0; j < n; ++j) s.x[j + 1][j] += step;
    s.f.resize(n + 1);
    for (size_t j = 0; j <= n; ++j) s.f[j] = objective(s.x[j]);

    bool settled = false;
    while (iterations < opts.max_iterations) {
      ++iterations;
      std::vector<size_t> order(n + 1);
      std::iota(order.begin(), order.end(), size_t(0));
      std::sort(order.begin(), order.end(),
                [&s](size_t a, size_t b) { return s.f[a] < s.f[b]; });
      size_t lo = order[0], hi = order[n], second_hi = order[n - 1];

      double spread = s.f[hi] - s.f[lo];
      double diameter = 0.0;
      for (size_t j = 0; j < n; ++j) {
        double span = 0.0;
        for (size_t v = 1; v <= n; ++v)
          span = std::max(span, std::abs(s.x[order[v]][j] - s.x[lo][j]));
        diameter = std::max(diameter, span);
      }
      if (spread <= kFTol * std::abs(s.f[lo]) || diameter <= kXTol) {
        settled = true;
        break;
      }

      std::vector<double> centroid(n, 0.0);
      for (size_t v = 0; v <= n; ++v) {
        if (v == hi) continue;
        for (size_t j = 0; j < n; ++j) centroid[j] += s.x[v][j];
      }
      for (size_t j = 0; j < n; ++j) centroid[j] /= double(n);

      auto blend = [&](double coeff) {
        std::vector<double> p(n);
        for (size_t j = 0; j < n; ++j)
          p[j] = centroid[j] + coeff * (centroid[j] - s.x[hi][j]);
        return p;
      };

      std::vector<double> xr = blend(kReflect);
      double fr = objective(xr);
      if (fr < s.f[lo]) {
        std::vector<double> xe = blend(kExpand);
        double fe = objective(xe);
        if (fe < fr) {
          s.x[hi] = std::move(xe);
          s.f[hi] = fe;
        } else {
          s.x[hi] = std::move(xr);
          s.f[hi] = fr;
        }
      } else if (fr < s.f[second_hi]) {
        s.x[hi] = std::move(xr);
        s.f[hi] = fr;
      } else {
        std::vector<double> xc = blend(-kContract);
        double fc = objective(xc);
        if (fc < s.f[hi]) {
          s.x[hi] = std::move(xc);
          s.f[hi] = fc;
        } else {
          for (size_t v = 0; v <= n; ++v) {
            if (v == lo) continue;
            for (size_t j = 0; j < n; ++j)
              s.x[v][j] = s.x[lo][j] + kShrink * (s.x[v][j] - s.x[lo][j]);
            s.f[v] = objective(s.x[v]);
          }
        }
      }
    }

    size_t lo = 0;
    for (size_t v = 1; v <= n; ++v)
      if (s.f[v] < s.f[lo]) lo = v;
    if (s.f[lo] < best_f) {
      best_f = s.f[lo];
      best = s.x[lo];
    }
    converged = settled;
    step *= 0.2;  // restart tighter around the incumbent
    if (iterations >= opts.max_iterations) break;
  }

  FitResult out;
  out.model = decode(family, lorentz_terms, best);
  out.model.validate();
  out.residual_norm = std::sqrt(best_f);
  out.iterations = iterations;
  out.converged = converged;
  return out;
}

}  // namespace casimir::materials
