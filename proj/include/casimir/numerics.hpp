#pragma once

#include <functional>
#include <span>

namespace casimir::num {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute, accumulated over subintervals
  long evaluations = 0;
};

// Adaptive Simpson quadrature of f on [a, b]: nested interval bisection with
// local error control. The tolerance is relative to the initial panel-pass
// estimate of the integral, so single-signed integrands converge to
// |error| <~ rel_tol * |integral|. Throws NumericError if the recursion
// bottoms out with the error budget still blown.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double rel_tol);

// Pairwise (cascade) summation in index order. Fixed association makes the
// result independent of how the terms were produced, which keeps threaded
// and serial evaluations bitwise identical.
double pairwise_sum(std::span<const double> terms);

// Two-sided normal quantile: z such that P(|Z| <= z) = confidence for
// standard normal Z. Rational initial guess refined by Newton steps on the
// erfc form; accurate to ~1e-15 over confidence in (0, 1).
double normal_quantile_two_sided(double confidence);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares line through (x_i, y_i).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Piecewise-linear interpolation on an ascending grid. Throws CoverageError
// outside [x.front(), x.back()].
double interp_linear(std::span<const double> x, std::span<const double> y,
                     double xq);

}  // namespace casimir::num
