#pragma once

#include "desens/film.hpp"

namespace desens {

/// One trapezoidal sensing cell. The electrode is a trapezoid with bases
/// bl (attached to one frame) and bu (attached to the facing frame) a
/// height h0 apart; only the mean base b = (bl + bu)/2 enters the model.
///
/// Displacing the moving frame by y along the cell axis stretches the cell
/// to height h = h0 + y. Volume conservation of the membrane at constant
/// width then yields the quadratic response C(y) = k (h0 + y)^2 with
/// k = eps_r eps_0 b / (h0 d0), so C(0) = eps_r eps_0 b h0 / d0.
struct CellGeometry {
  double lower_base_mm = 30.0;
  double upper_base_mm = 100.0;
  double initial_height_mm = 55.0;
  MaterialFilm film;

  double mean_base_mm() const { return 0.5 * (lower_base_mm + upper_base_mm); }

  /// Quadratic response coefficient k, pF/mm^2. Recomputed on demand so a
  /// geometry edit can never leave a stale cached value.
  double k_pf_per_mm2() const;

  /// Unstretched cell length l0 = h0 / lambda0, mm (stretch-bound reference).
  double unstretched_length_mm() const;

  bool operator==(const CellGeometry&) const = default;

  /// Throws std::domain_error on non-physical values.
  void validate() const;
};

/// Parallel-plate capacitance eps_0 eps_r area / thickness, in pF, times the
/// film's layer_count. area in mm^2, thickness in mm.
double flat_capacitance_pf(double area_mm2, double thickness_mm,
                           const MaterialFilm& film);

/// Cell capacitance at displacement y (mm) along the cell axis, pF.
/// Throws std::domain_error once the cell collapses (h0 + y <= 0).
double cell_capacitance_pf(const CellGeometry& cell, double y_mm);

/// In-plane sensitivity components of one cell, pF/mm.
struct CellSensitivity {
  /// dC/dy = 2 k (h0 + y): along the stretch axis.
  double dc_dy_pf_per_mm = 0.0;
  /// dC/dx = 0: a transverse slide changes neither area nor thickness.
  double dc_dx_pf_per_mm = 0.0;
};

/// Analytic sensitivity at displacement y (mm).
/// Throws std::domain_error if the cell is collapsed at y.
CellSensitivity cell_sensitivity(const CellGeometry& cell, double y_mm);

}  // namespace desens
