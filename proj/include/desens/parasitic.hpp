#pragma once

#include "desens/pair.hpp"

namespace desens {

/// Largest rotation magnitude (rad) the model treats as "small": below this,
/// an in-plane rotation leaves every cell's capacitance unchanged to first
/// order. Beyond it the model refuses to extrapolate and flags the result.
/// 10 degrees.
inline constexpr double kSmallAngleLimitRad = 0.17453292519943295;

/// Out-of-plane pose of the moving frame relative to the sensor plane,
/// evaluated at the centered in-plane position.
struct ParasiticPose {
  /// Normal (out-of-plane) translation, mm.
  double z_mm = 0.0;
  /// Out-of-plane rotation magnitude about an in-plane axis, rad. The model
  /// treats rotations about x and y identically (same lever geometry).
  double rot_out_of_plane_rad = 0.0;
  /// In-plane rotation about the sensor normal, rad. Small angles produce no
  /// capacitance change; large ones are flagged as not modeled.
  double rot_in_plane_rad = 0.0;
  /// Inner frame radius (rotation lever arm root), mm.
  double inner_radius_mm = 20.0;
  /// Outer frame radius, mm.
  double outer_radius_mm = 75.0;

  /// Throws std::domain_error unless 0 < inner_radius < outer_radius.
  void validate() const;
};

/// Height gain of a cell of current height h under a normal translation z:
///   dh = sqrt(h^2 + z^2) - h.
/// Computed in the cancellation-free form z^2 / (sqrt(h^2 + z^2) + h). Even
/// in z, zero at z = 0, strictly increasing in |z|, decreasing in h.
/// Throws std::domain_error if h <= 0.
double height_gain_z_mm(double height_mm, double z_mm);

/// Height gain of a cell of current height h whose inner anchor sits at
/// radius r_i from the rotation center, under an out-of-plane rotation
/// theta: the anchor swings out of the plane, lengthening the cell to the
/// chord sqrt((h + r_i)^2 + r_i^2 - 2 (h + r_i) r_i cos(theta)).
/// Computed via 1 - cos(theta) = 2 sin^2(theta/2) to stay exact near zero.
/// Even in theta, zero at theta = 0.
/// Throws std::domain_error if h <= 0 or r_i <= 0.
double height_gain_rotation_mm(double height_mm, double inner_radius_mm,
                               double theta_rad);

/// Compose the modeled parasitic height gains onto a current cell height:
/// out-of-plane rotation first, then the normal translation applied to the
/// rotation-augmented height (sequential composition).
double apply_parasitic_gains_mm(double height_mm, double inner_radius_mm,
                                double rot_out_of_plane_rad, double z_mm);

/// Stretch-feasibility report for a cell over a displacement interval.
struct StretchReport {
  bool ok = false;
  /// Stretch ratio h/l0 at the interval ends (the response is monotone).
  double min_stretch = 0.0;
  double max_stretch = 0.0;
};

/// Checks 1 <= (h0 + y)/l0 <= lambda_max across the interval, where
/// l0 = h0/lambda0. Below 1 the film buckles (goes slack); above lambda_max
/// it fails. Throws std::domain_error on an invalid interval.
StretchReport stretch_feasible(const CellGeometry& cell, Interval y_range);

/// Result of a parasitic-cancellation evaluation.
struct CancellationResult {
  /// Change of the differential reading from its rest offset, pF.
  double residual_pf = 0.0;
  /// False when |rot_in_plane| exceeds the small-angle regime; the residual
  /// then excludes any in-plane-rotation effect rather than extrapolating.
  bool in_plane_rotation_modeled = true;
};

/// Applies the pose's height gains to both cells of a pair at the centered
/// in-plane position and returns the resulting change of the differential
/// reading. Identical cells cancel exactly: a z shim satisfies
/// (h + dh)^2 = h^2 + z^2, so each cell's capacitance shifts by exactly
/// k z^2 and a matched-k pair shows zero residual at every in-plane
/// position, not just the center.
CancellationResult parasitic_cancellation_residual(const CellPair& pair,
                                                   const ParasiticPose& pose);

}  // namespace desens
