#include "casimir/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir::num {

namespace {

struct SimpsonState {
  const std::function<double(double)>* f;
  long evaluations;
  double error;
  int max_depth;
};

double eval(SimpsonState& st, double x) {
  ++st.evaluations;
  double v = (*st.f)(x);
  if (!std::isfinite(v)) throw NumericError("quadrature: integrand not finite");
  return v;
}

// One bisection level: compares Simpson on [a,b] against the two halves and
// accepts when the Richardson-extrapolated error fits the local budget.
double simpson_step(SimpsonState& st, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = eval(st, lm);
  double frm = eval(st, rm);
  double h = b - a;
  double left = h / 12.0 * (fa + 4.0 * flm + fm);
  double right = h / 12.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth >= st.max_depth || std::abs(delta) <= 15.0 * tol) {
    st.error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double rel_tol) {
  if (!(b > a)) throw DomainError("quadrature: empty or reversed interval");
  if (!(rel_tol > 0.0)) throw DomainError("quadrature: tolerance must be positive");

  SimpsonState st{&f, 0, 0.0, 48};

  // Top-level panel pass doubles as the scale estimate for the absolute
  // budget; the integrands here are single-signed, so the panel total cannot
  // vanish by cancellation. Panel node values are reused by the recursion.
  const int kPanels = 8;
  double ph = (b - a) / kPanels;
  double fa[kPanels], fm[kPanels], fb[kPanels], whole[kPanels];
  double scale = 0.0;
  double left = eval(st, a);
  for (int i = 0; i < kPanels; ++i) {
    double pa = a + i * ph;
    fa[i] = left;
    fm[i] = eval(st, pa + 0.5 * ph);
    fb[i] = eval(st, i + 1 == kPanels ? b : pa + ph);
    whole[i] = ph / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
    scale += whole[i];
    left = fb[i];
  }
  double abs_tol = rel_tol * std::max(std::abs(scale),
                                      std::numeric_limits<double>::min());

  QuadratureResult out;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    double pa = a + i * ph;
    double pb = i + 1 == kPanels ? b : pa + ph;
    total += simpson_step(st, pa, pb, fa[i], fm[i], fb[i], whole[i],
                          abs_tol / kPanels, 0);
  }
  if (st.error > 1e3 * abs_tol)
    throw NumericError("quadrature: did not converge to requested tolerance");
  out.value = total;
  out.error_estimate = st.error;
  out.evaluations = st.evaluations;
  return out;
}

double pairwise_sum(std::span<const double> terms) {
  size_t n = terms.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  size_t half = n / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

namespace {

// Rational approximation for the standard normal inverse CDF (Acklam form);
// a couple of digits short of double precision on its own.
double norm_icdf_guess(double p) {
  static const double A[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double C[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
           ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) return -norm_icdf_guess(1.0 - p);
  double q = p - 0.5;
  double r = q * q;
  return (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
         (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

double normal_quantile_two_sided(double confidence) {
  if (!(confidence > 0.0) || !(confidence < 1.0))
    throw DomainError("confidence level must lie strictly between 0 and 1");
  double p = 0.5 * (1.0 + confidence);
  double x = norm_icdf_guess(p);
  // Newton on Phi(x) - p with analytic density; two steps reach ~1e-15.
  for (int i = 0; i < 3; ++i) {
    double err = norm_cdf(x) - p;
    double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf <= 0.0) break;
    x -= err / pdf;
  }
  return x;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("line fit needs at least two matched points");
  size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("line fit: abscissae are all equal");
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  return out;
}

double interp_linear(std::span<const double> x, std::span<const double> y,
                     double xq) {
  if (x.size() != y.size() || x.empty())
    throw DomainError("interpolation table is empty or ragged");
  if (xq < x.front() || xq > x.back())
    throw CoverageError("interpolation query outside tabulated range");
  auto it = std::lower_bound(x.begin(), x.end(), xq);
  if (it == x.begin()) return y.front();
  size_t hi = size_t(it - x.begin());
  size_t lo = hi - 1;
  double t = (xq - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + t * (y[hi] - y[lo]);
}

}  // namespace casimir::num
