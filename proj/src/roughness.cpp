#include "casimir/roughness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"

namespace casimir::roughness {

void RoughnessProfile::validate() const {
  if (fraction.empty() || fraction.size() != height_nm.size())
    throw DomainError("roughness profile is empty or ragged");
  double total = 0.0;
  for (double v : fraction) {
    if (!(v > 0.0)) throw DomainError("roughness fractions must be positive");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw DomainError("roughness fractions must sum to 1 (got " +
                      std::to_string(total) + ")");
  for (double h : height_nm)
    if (!std::isfinite(h)) throw DomainError("roughness heights must be finite");
}

double RoughnessProfile::zero_level() const {
  double z = 0.0;
  for (size_t i = 0; i < fraction.size(); ++i) z += fraction[i] * height_nm[i];
  return z;
}

double RoughnessProfile::max_height() const {
  double m = height_nm.front();
  for (double h : height_nm) m = std::max(m, h);
  return m;
}

RoughnessProfile RoughnessProfile::flat() {
  RoughnessProfile p;
  p.fraction = {1.0};
  p.height_nm = {0.0};
  return p;
}

RoughnessProfile RoughnessProfile::from_heights(std::span<const double> samples_nm,
                                                int bins) {
  if (samples_nm.empty()) throw DomainError("height map has no samples");
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  double lo = samples_nm[0], hi = samples_nm[0];
  for (double s : samples_nm) {
    if (!std::isfinite(s)) throw DomainError("height samples must be finite");
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  RoughnessProfile p;
  if (lo == hi) {
    p.fraction = {1.0};
    p.height_nm = {lo};
    return p;
  }
  std::vector<long> counts(size_t(bins), 0);
  double width = (hi - lo) / bins;
  for (double s : samples_nm) {
    int b = std::min(int((s - lo) / width), bins - 1);
    ++counts[size_t(b)];
  }
  for (int b = 0; b < bins; ++b) {
    if (counts[size_t(b)] == 0) continue;  // drop empty bins, fractions stay positive
    p.fraction.push_back(double(counts[size_t(b)]) / double(samples_nm.size()));
    p.height_nm.push_back(lo + (b + 0.5) * width);
  }
  p.validate();
  return p;
}

double averaged_quantity(const std::function<double(double)>& f,
                         double separation_nm, const RoughnessProfile& sphere,
                         const RoughnessProfile& plate) {
  sphere.validate();
  plate.validate();
  if (!(separation_nm > 0.0)) throw GeometryError("separation must be positive");
  double base = separation_nm + sphere.zero_level() + plate.zero_level();

  // Check every bin pair before evaluating anything, so a contact failure
  // cannot leave partial work behind.
  for (size_t i = 0; i < sphere.fraction.size(); ++i) {
    for (size_t k = 0; k < plate.fraction.size(); ++k) {
      double gap = base - sphere.height_nm[i] - plate.height_nm[k];
      if (!(gap > 0.0))
        throw GeometryError(
            "roughness bins close the gap: sphere bin " + std::to_string(i) +
            " against plate bin " + std::to_string(k) + " leaves " +
            std::to_string(gap) + " nm");
    }
  }

  std::vector<double> terms;
  terms.reserve(sphere.fraction.size() * plate.fraction.size());
  for (size_t i = 0; i < sphere.fraction.size(); ++i) {
    for (size_t k = 0; k < plate.fraction.size(); ++k) {
      double gap = base - sphere.height_nm[i] - plate.height_nm[k];
      terms.push_back(sphere.fraction[i] * plate.fraction[k] * f(gap));
    }
  }
  return num::pairwise_sum(terms);
}

}  // namespace casimir::roughness
