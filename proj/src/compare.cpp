#include "casimir/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"

namespace casimir::compare {

QuantityKind quantity_from_string(std::string_view name) {
  if (name == "force_pn") return QuantityKind::ForcePn;
  if (name == "gradient_un_per_m") return QuantityKind::GradientUnPerM;
  if (name == "pressure_mpa") return QuantityKind::PressureMpa;
  throw ParseError("unknown quantity: " + std::string(name));
}

std::string_view quantity_name(QuantityKind q) {
  switch (q) {
    case QuantityKind::ForcePn: return "force_pn";
    case QuantityKind::GradientUnPerM: return "gradient_un_per_m";
    case QuantityKind::PressureMpa: return "pressure_mpa";
  }
  return "";
}

void MeasurementPoint::validate() const {
  if (!(a_nm > 0.0)) throw DomainError("measurement separation must be positive");
  if (!(da_nm > 0.0) || !(dvalue > 0.0))
    throw DomainError("measurement arms must be positive");
  if (!(confidence > 0.0) || !(confidence < 1.0))
    throw DomainError("measurement confidence must lie in (0, 1)");
  if (!std::isfinite(value)) throw DomainError("measurement value must be finite");
}

void TheoryBand::validate() const {
  if (a_nm.size() < 2) throw DomainError("band needs at least two grid points");
  if (lo.size() != a_nm.size() || hi.size() != a_nm.size())
    throw DomainError("band columns differ in length");
  for (size_t i = 0; i < a_nm.size(); ++i) {
    if (i > 0 && !(a_nm[i] > a_nm[i - 1]))
      throw DomainError("band grid must be strictly ascending");
    if (!(lo[i] <= hi[i]))
      throw DomainError("band edges cross at a = " + std::to_string(a_nm[i]));
  }
}

double TheoryBand::lo_at(double a) const { return num::interp_linear(a_nm, lo, a); }
double TheoryBand::hi_at(double a) const { return num::interp_linear(a_nm, hi, a); }

TheoryBand make_band(std::span<const double> a_nm,
                     std::span<const double> center,
                     const BandHalfwidthSpec& halfwidth,
                     std::string provenance) {
  if (a_nm.size() != center.size())
    throw DomainError("band grid and centers differ in length");
  TheoryBand band;
  band.a_nm.assign(a_nm.begin(), a_nm.end());
  band.provenance = std::move(provenance);
  std::vector<double> tx, ty;
  if (halfwidth.mode == BandHalfwidthSpec::Mode::Table) {
    for (const auto& [a, h] : halfwidth.table) {
      tx.push_back(a);
      ty.push_back(h);
    }
    if (tx.size() < 2) throw DomainError("halfwidth table needs at least two rows");
  } else if (!(halfwidth.value >= 0.0)) {
    throw DomainError("band halfwidth must be nonnegative");
  }
  for (size_t i = 0; i < a_nm.size(); ++i) {
    double h = 0.0;
    switch (halfwidth.mode) {
      case BandHalfwidthSpec::Mode::Absolute:
        h = halfwidth.value;
        break;
      case BandHalfwidthSpec::Mode::RelativeToCenter:
        h = halfwidth.value * std::abs(center[i]);
        break;
      case BandHalfwidthSpec::Mode::Table:
        h = num::interp_linear(tx, ty, a_nm[i]);
        if (!(h >= 0.0)) throw DomainError("halfwidth table has negative entries");
        break;
    }
    band.lo.push_back(center[i] - h);
    band.hi.push_back(center[i] + h);
  }
  band.validate();
  return band;
}

PointVerdict verdict(const MeasurementPoint& p, const TheoryBand& band,
                     const VerdictPolicy& policy) {
  p.validate();
  band.validate();
  double x_lo = p.a_nm - p.da_nm;
  double x_hi = p.a_nm + p.da_nm;
  if (x_lo < band.a_nm.front() || x_hi > band.a_nm.back())
    throw CoverageError("measurement separation arm extends beyond the band grid");

  if (policy.quadrature_combined) {
    double h = 0.5 * (band.hi_at(p.a_nm) - band.lo_at(p.a_nm));
    double center = 0.5 * (band.hi_at(p.a_nm) + band.lo_at(p.a_nm));
    double sigma = std::sqrt(p.dvalue * p.dvalue + h * h);
    PointVerdict out;
    out.margin = std::abs(p.value - center) - sigma;
    out.verdict = out.margin > 0.0 ? Verdict::Excluded : Verdict::Consistent;
    return out;
  }

  double v_lo = p.value - p.dvalue;
  double v_hi = p.value + p.dvalue;

  // gap(x) = max(lo(x) - v_hi, v_lo - hi(x)) is piecewise linear in x, so
  // its minimum over the arm lies at an interval endpoint or a grid node.
  std::vector<double> xs = {x_lo, x_hi};
  for (double a : band.a_nm)
    if (a > x_lo && a < x_hi) xs.push_back(a);
  double margin = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    double gap = std::max(band.lo_at(x) - v_hi, v_lo - band.hi_at(x));
    margin = std::min(margin, gap);
  }
  PointVerdict out;
  out.margin = margin;
  out.verdict = margin > 0.0 ? Verdict::Excluded : Verdict::Consistent;
  return out;
}

MeasurementPoint rescale_confidence(const MeasurementPoint& p, double from,
                                    double to) {
  p.validate();
  double scale = num::normal_quantile_two_sided(to) /
                 num::normal_quantile_two_sided(from);
  MeasurementPoint out = p;
  out.da_nm = p.da_nm * scale;
  out.dvalue = p.dvalue * scale;
  out.confidence = to;
  return out;
}

namespace {

std::string format_nm(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string window_statement(QuantityKind q, const ComparisonReport& rep,
                             const ExclusionWindow& w, bool full_range) {
  // Confidence quoted only when uniform across the window.
  double conf = rep.points[w.first_index].confidence;
  bool uniform = true;
  for (size_t i = w.first_index; i <= w.last_index; ++i)
    if (rep.points[i].confidence != conf) uniform = false;
  std::string level = uniform
                          ? "at the " + format_nm(conf * 100.0) + "% confidence level"
                          : "at the confidence levels of the individual points";
  std::string range = full_range
                          ? "over the entire measured range " + format_nm(w.a_lo_nm) +
                                "-" + format_nm(w.a_hi_nm) + " nm"
                          : "for separations " + format_nm(w.a_lo_nm) + "-" +
                                format_nm(w.a_hi_nm) + " nm";
  return "Measured " + std::string(quantity_name(q)) +
         " excludes the predicted band " + level + " " + range + ".";
}

}  // namespace

ComparisonReport exclusion_summary(const Dataset& data, const TheoryBand& band,
                                   const VerdictPolicy& policy) {
  if (data.points.empty()) throw DomainError("dataset has no points");
  ComparisonReport rep;
  rep.quantity = data.quantity;
  rep.points = data.points;
  std::stable_sort(rep.points.begin(), rep.points.end(),
                   [](const MeasurementPoint& a, const MeasurementPoint& b) {
                     return a.a_nm < b.a_nm;
                   });
  rep.verdicts.reserve(rep.points.size());
  for (const auto& p : rep.points)
    rep.verdicts.push_back(verdict(p, band, policy));

  for (size_t i = 0; i < rep.verdicts.size(); ++i) {
    if (rep.verdicts[i].verdict == Verdict::Excluded) {
      ++rep.n_excluded;
      if (!rep.windows.empty() && rep.windows.back().last_index + 1 == i) {
        rep.windows.back().last_index = i;
        rep.windows.back().a_hi_nm = rep.points[i].a_nm;
      } else {
        rep.windows.push_back({rep.points[i].a_nm, rep.points[i].a_nm, i, i});
      }
    } else {
      ++rep.n_consistent;
    }
  }
  rep.full_range_excluded = rep.n_excluded == rep.points.size();
  for (const auto& w : rep.windows)
    rep.statements.push_back(
        window_statement(rep.quantity, rep, w, rep.full_range_excluded));
  return rep;
}

}  // namespace casimir::compare
