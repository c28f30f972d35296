#include "desens/design.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace desens {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
}

void DesignPoint::validate() const {
  film.validate();
  if (!(inner_radius_mm > 0.0))
    throw std::domain_error("design: inner radius must be > 0 mm, got " +
                            std::to_string(inner_radius_mm));
  if (!(outer_radius_mm > inner_radius_mm))
    throw std::domain_error(
        "design: outer radius must exceed the inner radius, got ri=" +
        std::to_string(inner_radius_mm) +
        " ro=" + std::to_string(outer_radius_mm));
  if (!(outer_radius_mm <= kMaxOuterRadiusMm))
    throw std::domain_error("design: outer radius " +
                            std::to_string(outer_radius_mm) +
                            " mm exceeds the frame envelope of " +
                            std::to_string(kMaxOuterRadiusMm) + " mm");
  if (!(section_angle_rad > 0.0) || !(section_angle_rad <= kHalfPi))
    throw std::domain_error(
        "design: section angle must lie in (0, pi/2] rad, got " +
        std::to_string(section_angle_rad));
  if (!(y_stroke_mm >= 0.0))
    throw std::domain_error("design: working stroke must be >= 0 mm, got " +
                            std::to_string(y_stroke_mm));
}

CellGeometry geometry_from_circle(const DesignPoint& point) {
  point.validate();
  CellGeometry cell;
  const double half = 0.5 * point.section_angle_rad;
  cell.lower_base_mm = 2.0 * point.inner_radius_mm * std::sin(half);
  cell.upper_base_mm = 2.0 * point.outer_radius_mm * std::sin(half);
  cell.initial_height_mm = point.outer_radius_mm - point.inner_radius_mm;
  cell.film = point.film;
  return cell;
}

DesignScore score(const DesignPoint& point, double mismatch) {
  if (!(mismatch >= 0.0) || !(mismatch < 1.0))
    throw std::domain_error("score: base mismatch must lie in [0, 1), got " +
                            std::to_string(mismatch));
  const CellGeometry cell = geometry_from_circle(point);

  DesignScore result;
  // Identical facing pair: slope at rest is 4 k h0.
  CellPair identical{cell, cell};
  result.sensitivity_pf_per_mm =
      differential_sensitivity_pf_per_mm(identical, 0.0);
  result.base_capacitance_pf = cell_capacitance_pf(cell, 0.0);
  result.parasitic_z_gain_per_mm = 1.0 / (2.0 * cell.initial_height_mm);

  const StretchReport stretch =
      stretch_feasible(cell, {-point.y_stroke_mm, point.y_stroke_mm});
  result.stretch_ok = stretch.ok;

  // The linearity figure needs the pair inflated across the whole stroke;
  // a stroke that collapses the cell is already flagged via stretch_ok.
  if (point.y_stroke_mm > 0.0 &&
      point.y_stroke_mm < cell.initial_height_mm) {
    CellPair skewed = identical;
    skewed.cell_1.lower_base_mm *= 1.0 + mismatch;
    skewed.cell_1.upper_base_mm *= 1.0 + mismatch;
    skewed.cell_2.lower_base_mm *= 1.0 - mismatch;
    skewed.cell_2.upper_base_mm *= 1.0 - mismatch;
    result.linearity_error =
        linearity_error(skewed, {-point.y_stroke_mm, point.y_stroke_mm});
  }
  return result;
}

SweepResult sweep(const SweepRanges& ranges) {
  ranges.base_film.validate();
  // Sweeping pre-stretch keeps the raw (unstretched) film volume fixed:
  // biaxial pre-stretch lambda0 thins the film by 1/lambda0^2.
  const double raw_thickness_mm = ranges.base_film.initial_thickness_mm *
                                  ranges.base_film.pre_stretch *
                                  ranges.base_film.pre_stretch;
  SweepResult result;
  for (double ri : ranges.inner_radius_mm)
    for (double ro : ranges.outer_radius_mm)
      for (double theta : ranges.section_angle_rad)
        for (double lambda0 : ranges.pre_stretch)
          for (int layers : ranges.layer_counts) {
            DesignPoint point;
            point.inner_radius_mm = ri;
            point.outer_radius_mm = ro;
            point.section_angle_rad = theta;
            point.film = ranges.base_film;
            point.film.pre_stretch = lambda0;
            point.film.layer_count = layers;
            point.y_stroke_mm = ranges.y_stroke_mm;
            if (lambda0 > 0.0)
              point.film.initial_thickness_mm =
                  raw_thickness_mm / (lambda0 * lambda0);
            try {
              point.validate();
            } catch (const std::domain_error&) {
              ++result.skipped_invalid;
              continue;
            }
            result.rows.push_back({point, score(point, ranges.mismatch)});
          }
  return result;
}

}  // namespace desens
