#pragma once

#include "desens/cell.hpp"

namespace desens {

/// Closed interval of axis displacements, mm.
struct Interval {
  double lo_mm = 0.0;
  double hi_mm = 0.0;
};

/// Two cells facing each other across the moving frame, measured
/// differentially. Sign convention: cell_1 is the cell whose height grows
/// with positive axis displacement (h1 = h0,1 + y), cell_2 shrinks
/// (h2 = h0,2 - y). The differential reading is C1 - C2.
///
/// Both cells are regions of the same membrane, so they must share one
/// MaterialFilm (in particular the same initial thickness).
struct CellPair {
  CellGeometry cell_1;
  CellGeometry cell_2;

  /// Rest offset dC0 = C1(0) - C2(0), pF. Always derived from the
  /// geometries, never stored, so it cannot drift out of sync.
  double initial_offset_pf() const;

  bool operator==(const CellPair&) const = default;

  /// Throws std::domain_error if either cell is invalid or the films differ.
  void validate() const;
};

/// Differential capacitance C1(y) - C2(-y contraction) at displacement y, pF:
///   dC(y) = k1 (h0,1 + y)^2 - k2 (h0,2 - y)^2
///         = 2 (k1 h0,1 + k2 h0,2) y + (k1 - k2) y^2 + dC0.
/// For identical cells this collapses to the linear law dC = 4 k h0 y.
/// Throws std::domain_error if either cell collapses at y.
double differential_capacitance_pf(const CellPair& pair, double y_mm);

/// Analytic derivative d(dC)/dy = 2 [k1 (h0,1 + y) + k2 (h0,2 - y)], pF/mm.
/// At y = 0 this is exactly twice the one-cell sensitivity for identical
/// cells. Throws std::domain_error if either cell collapses at y.
double differential_sensitivity_pf_per_mm(const CellPair& pair, double y_mm);

/// Worst-case deviation of dC from its least-squares linear fit over the
/// interval, normalized by (sensitivity at the interval midpoint) * width.
/// The response is an exact quadratic, so the continuous-fit residual has
/// the closed form max|r| = (2/3) |k1 - k2| L^2 with L the half-width, and
/// the result is |k1 - k2| L / (3 |slope_mid|). Zero for identical cells.
/// Throws std::domain_error on an empty/invalid interval or collapse.
double linearity_error(const CellPair& pair, Interval y_range);

}  // namespace desens
