#pragma once

#include <span>
#include <string_view>
#include <utility>

#include "casimir/materials.hpp"

namespace casimir::materials {

enum class ModelFamily { Lorentz, Modified, NinhamParsegian };

ModelFamily family_from_string(std::string_view name);
std::string_view family_name(ModelFamily f);
int family_parameter_count(ModelFamily f, int lorentz_terms = 1);

struct FitOptions {
  int max_iterations = 20000;  // simplex steps across all restarts
  int restarts = 4;
  int lorentz_terms = 1;  // number of oscillators when family == Lorentz
};

struct FitResult {
  ResponseModel model;
  double residual_norm = 0.0;  // sqrt(sum of squared log residuals)
  int iterations = 0;
  bool converged = false;
};

// Least-squares fit of eps(i xi) samples to one model family. Residuals are
// differences of log(eps - 1), so decades of xi weigh equally. The search is
// a Nelder-Mead simplex in log-parameter space (the fractional exponent is
// mapped through a logistic onto (0, 2)), restarted from the incumbent to
// shake off flat regions. Samples are (xi_ev, eps) pairs with eps > 1.
FitResult fit_oscillator(std::span<const std::pair<double, double>> samples,
                         ModelFamily family, std::span<const double> initial,
                         const FitOptions& opts = {});

}  // namespace casimir::materials
