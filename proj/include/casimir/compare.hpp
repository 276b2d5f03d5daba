#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace casimir::compare {

enum class QuantityKind { ForcePn, GradientUnPerM, PressureMpa };

QuantityKind quantity_from_string(std::string_view name);
std::string_view quantity_name(QuantityKind q);

// One experimental cross: separation a +- da, measured value +- dvalue, both
// arms quoted at the same confidence level.
struct MeasurementPoint {
  double a_nm = 0.0;
  double da_nm = 0.0;
  double value = 0.0;
  double dvalue = 0.0;
  double confidence = 0.95;
  void validate() const;
};

struct Dataset {
  QuantityKind quantity = QuantityKind::ForcePn;
  std::vector<MeasurementPoint> points;
};

// Theoretical prediction with its uncertainty as a piecewise-linear band
// lo(a) <= hi(a) over an ascending separation grid.
struct TheoryBand {
  std::vector<double> a_nm;
  std::vector<double> lo;
  std::vector<double> hi;
  std::string provenance;  // description of how the band was produced

  void validate() const;
  double lo_at(double a) const;  // CoverageError outside the grid
  double hi_at(double a) const;
};

// How the band halfwidth is specified around computed centers.
struct BandHalfwidthSpec {
  enum class Mode { Absolute, RelativeToCenter, Table };
  Mode mode = Mode::RelativeToCenter;
  double value = 0.0;  // absolute halfwidth, or fraction of |center|
  std::vector<std::pair<double, double>> table;  // (a_nm, halfwidth), ascending
};

TheoryBand make_band(std::span<const double> a_nm,
                     std::span<const double> center,
                     const BandHalfwidthSpec& halfwidth,
                     std::string provenance);

enum class Verdict { Consistent, Excluded };

struct PointVerdict {
  Verdict verdict = Verdict::Consistent;
  // Signed separation between the measurement rectangle and the band:
  // positive = disjoint by that much (excluded), <= 0 = overlap.
  double margin = 0.0;
};

struct VerdictPolicy {
  // Off (default): geometric test, consistent iff the cross rectangle
  // touches the band anywhere along the separation arm. On: the value arm
  // and the band halfwidth at the nominal separation are combined in
  // quadrature instead.
  bool quadrature_combined = false;
};

// A point is consistent when the rectangle [a - da, a + da] x
// [value - dvalue, value + dvalue] meets the band anywhere; both error arms
// enter, not just the value arm.
PointVerdict verdict(const MeasurementPoint& p, const TheoryBand& band,
                     const VerdictPolicy& policy = {});

// Scale both error arms by the ratio of two-sided normal quantiles, e.g.
// republishing 67%-level arms at the 95% level.
MeasurementPoint rescale_confidence(const MeasurementPoint& p, double from,
                                    double to);

struct ExclusionWindow {
  double a_lo_nm = 0.0;
  double a_hi_nm = 0.0;
  size_t first_index = 0;  // into the sorted point list
  size_t last_index = 0;
};

struct ComparisonReport {
  QuantityKind quantity = QuantityKind::ForcePn;
  std::vector<MeasurementPoint> points;  // sorted by ascending separation
  std::vector<PointVerdict> verdicts;    // parallel to points
  size_t n_consistent = 0;
  size_t n_excluded = 0;
  std::vector<ExclusionWindow> windows;  // maximal runs of excluded points
  bool full_range_excluded = false;
  std::vector<std::string> statements;   // one sentence per window
};

ComparisonReport exclusion_summary(const Dataset& data, const TheoryBand& band,
                                   const VerdictPolicy& policy = {});

}  // namespace casimir::compare
