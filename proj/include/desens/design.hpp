#pragma once

#include <vector>

#include "desens/parasitic.hpp"

namespace desens {

/// Frame envelope limit on the outer radius, mm.
inline constexpr double kMaxOuterRadiusMm = 75.0;

/// One candidate cell design inside an annular sector of the sensor disc.
struct DesignPoint {
  double inner_radius_mm = 20.0;
  double outer_radius_mm = 75.0;
  /// Angular width of the sector allotted to the cell, rad.
  double section_angle_rad = 1.5707963267948966;
  MaterialFilm film;
  /// Symmetric working stroke +/- y_stroke the design must cover, mm.
  double y_stroke_mm = 15.0;

  /// Throws std::domain_error unless 0 < ri < ro <= kMaxOuterRadiusMm,
  /// 0 < theta <= pi/2, y_stroke >= 0 and the film is valid.
  void validate() const;
};

/// Trapezoid inscribed in the annular sector with its legs on the sector's
/// bounding radii: the bases are the chords through the radius/circle
/// intersections, bl = 2 ri sin(theta/2) at the inner frame and
/// bu = 2 ro sin(theta/2) at the outer frame, and the cell height is the
/// radial span h0 = ro - ri (the film's stretch direction).
CellGeometry geometry_from_circle(const DesignPoint& point);

/// Figure-of-merit bundle for one design point.
struct DesignScore {
  /// Differential sensitivity of an identical facing pair at rest, pF/mm.
  double sensitivity_pf_per_mm = 0.0;
  /// linearity_error of the pair under the given fractional base mismatch
  /// over the working stroke (dimensionless; 0 when the stroke is zero or
  /// collapses the cell, the latter being flagged via stretch_ok).
  double linearity_error = 0.0;
  /// Leading z-shim height gain coefficient d(dh)/d(z^2) = 1/(2 h0), 1/mm.
  double parasitic_z_gain_per_mm = 0.0;
  /// Stretch feasibility over the working stroke.
  bool stretch_ok = false;
  /// One-cell rest capacitance, pF.
  double base_capacitance_pf = 0.0;
};

/// Scores one design point. `mismatch` is the fractional base-width
/// imbalance (+/-) assumed between the two cells of the pair when scoring
/// linearity; default 2%.
DesignScore score(const DesignPoint& point, double mismatch = 0.02);

/// Cartesian sweep over design parameters. The film entries of the
/// candidate points share base_film's material data; sweeping pre-stretch
/// conserves raw film volume, i.e. the initial thickness scales as
/// d0 = d_raw / lambda0^2 with d_raw = base d0 * base lambda0^2.
struct SweepRanges {
  std::vector<double> inner_radius_mm;
  std::vector<double> outer_radius_mm;
  std::vector<double> section_angle_rad;
  std::vector<double> pre_stretch;
  std::vector<int> layer_counts;
  MaterialFilm base_film;
  double y_stroke_mm = 15.0;
  double mismatch = 0.02;
};

struct SweepRow {
  DesignPoint point;
  DesignScore score;
};

struct SweepResult {
  /// Rows in loop order ri -> ro -> theta -> pre_stretch -> layers.
  /// Stretch-infeasible designs are retained and flagged via
  /// score.stretch_ok; geometrically invalid combinations (ri >= ro,
  /// ro beyond the envelope, ...) are skipped and counted instead.
  std::vector<SweepRow> rows;
  int skipped_invalid = 0;
};

/// Empty ranges produce an empty table.
SweepResult sweep(const SweepRanges& ranges);

}  // namespace desens
