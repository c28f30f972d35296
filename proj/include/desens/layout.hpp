#pragma once

#include <array>
#include <cstdint>

#include "desens/pair.hpp"

namespace desens {

/// Full rigid pose of the moving frame in the measurement-grid frame.
/// Translations in mm, rotations in rad.
struct FramePose {
  double x_mm = 0.0;
  double y_mm = 0.0;
  double z_mm = 0.0;
  double rot_x_rad = 0.0;
  double rot_y_rad = 0.0;
  double rot_z_rad = 0.0;
};

/// One virtual reading of all four cells at a commanded pose.
struct CapacitanceSample {
  FramePose true_pose;
  double t_s = 0.0;
  double c_a_pf = 0.0;
  double c_b_pf = 0.0;
  double c_c_pf = 0.0;
  double c_d_pf = 0.0;
};

/// Additive i.i.d. zero-mean Gaussian read noise per cell measurement.
struct NoiseModel {
  double std_pf = 10.0;
  /// Single source of randomness: every protocol run derives its private
  /// stream from (seed, run_id).
  std::uint64_t seed = 0;

  /// Throws std::domain_error if std_pf is negative or non-finite.
  void validate() const;
};

/// Physical arrangement of the four cells A..D around the moving frame.
///
/// Cells A and C face each other along the sensor y axis, B and D along x.
/// `y_growing_is_a` selects which column of the pair grows with +y in the
/// sensor frame (the differential convention dC_AC = cA - cC is fixed, so
/// this flag is what flips the sign of the calibrated slope); likewise
/// `x_growing_is_b` for the x pair.
///
/// `grid_misalignment_rad` models a measurement jig that is slightly rotated
/// against the sensor axes: a commanded grid position (x, y) lands at sensor
/// coordinates
///   x' =  x cos(phi) + y sin(phi)
///   y' = -x sin(phi) + y cos(phi)
/// which is what turns a pure y sweep into a small cross-slope on the x pair
/// and vice versa. Must stay within the small-angle regime (|phi| < 10 deg).
struct SensorLayout {
  CellPair pair_y;
  CellPair pair_x;
  bool y_growing_is_a = true;
  bool x_growing_is_b = true;
  double inner_radius_mm = 20.0;
  double outer_radius_mm = 75.0;
  double grid_misalignment_rad = 0.0;
  /// Constant per-channel readout offsets (electronics bias), pF, in
  /// column order A, B, C, D.
  std::array<double, 4> cell_bias_pf{0.0, 0.0, 0.0, 0.0};

  /// Throws std::domain_error on invalid pairs, radii, or misalignment
  /// outside the small-angle regime.
  void validate() const;
};

}  // namespace desens
