#pragma once

#include <functional>
#include <span>
#include <vector>

namespace casimir::roughness {

// Discrete surface-height distribution: fraction v_i of the surface sits at
// height h_i above the mean plane reference. Fractions are positive and sum
// to one; zero_level is the mean height Sum v_i h_i, so separations measured
// from the zero-roughness position stay comparable across profiles.
struct RoughnessProfile {
  std::vector<double> fraction;
  std::vector<double> height_nm;

  void validate() const;
  double zero_level() const;
  double max_height() const;

  static RoughnessProfile flat();
  // Bin raw height samples into an equal-width histogram.
  static RoughnessProfile from_heights(std::span<const double> samples_nm,
                                       int bins);
};

// Geometric average of a separation-dependent quantity over the joint height
// distribution of the two facing surfaces:
//   <f>(a) = Sum_{i,k} v_i^1 v_k^2 f(a + H_1 + H_2 - h_i^1 - h_k^2)
// with H the zero levels. Distortions only shift the local gap, so any of
// force, gradient or pressure can be passed as f. Every evaluated separation
// must stay positive; a bin pair that closes the gap is a geometry error
// identifying the offending pair.
double averaged_quantity(const std::function<double(double)>& f,
                         double separation_nm, const RoughnessProfile& sphere,
                         const RoughnessProfile& plate);

}  // namespace casimir::roughness
