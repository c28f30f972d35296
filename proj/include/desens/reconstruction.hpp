#pragma once

#include "desens/calibration.hpp"

namespace desens {

/// Needle-guide geometry: two sensing planes a fixed distance apart, with
/// the guide tip extending beyond the plane of sensor 1 (the tip-side
/// sensor).
struct RobotGeometry {
  /// Distance l12 between the two sensing planes, mm.
  double plane_separation_mm = 200.0;
  /// Tip extension lp beyond sensor 1, mm.
  double tip_extension_mm = 200.0;

  /// Throws std::domain_error unless l12 > 0 and lp >= 0.
  void validate() const;
};

struct Vec2 {
  double x_mm = 0.0;
  double y_mm = 0.0;
};

/// Solves the 2x2 linear system formed by the two calibrated planes
///   dC_AC = aAC x + bAC y + gAC,   dC_BD = aBD x + bBD y + gBD
/// for the in-plane position (x, y). Throws NumericError when the system is
/// singular (near-parallel planes).
Vec2 reconstruct_xy(const CalibratedPlane& plane_ac,
                    const CalibratedPlane& plane_bd, double dc_ac_pf,
                    double dc_bd_pf);
Vec2 reconstruct_xy(const CalibratedPlane& plane_ac,
                    const CalibratedPlane& plane_bd,
                    const CapacitanceSample& sample);

/// Linear extrapolation of the two plane estimates to the guide tip:
///   tip = est1 + (lp / l12) (est1 - est2)
/// with sensor 1 nearer the tip. lp = 0 returns est1.
Vec2 fuse_tip(const Vec2& est1, const Vec2& est2, const RobotGeometry& geom);

/// Standard deviation of the tip position per translation DOF under
/// independent per-plane errors sigma1 (tip-side sensor) and sigma2:
///   sigma_tip = sqrt(((lp + l12)/l12)^2 sigma1^2 + (lp/l12)^2 sigma2^2).
/// Throws std::domain_error on negative sigmas.
double propagate_error_mm(double sigma1_mm, double sigma2_mm,
                          const RobotGeometry& geom);

/// Worst-case tip error when both plane estimates are off by at most
/// max_dev in the least favorable combination:
///   worst = max_dev * (lp/l12 + (lp + l12)/l12).
/// Always >= propagate_error_mm(max_dev, max_dev, geom).
double worst_case_error_mm(double max_dev_mm, const RobotGeometry& geom);

/// Fused pose of the needle guide at one time step.
struct PoseEstimate {
  double t_s = 0.0;
  Vec2 sensor1;
  Vec2 sensor2;
  Vec2 tip;
  double tip_sigma_mm = 0.0;
  /// Convenience tilt components of the guide axis between the planes:
  /// atan2(delta / l12) of the y and x estimate differences respectively.
  double tilt_yz_rad = 0.0;
  double tilt_xz_rad = 0.0;
};

/// Reconstructs both planes from time-aligned samples, extrapolates the tip,
/// and attaches the propagated uncertainty.
PoseEstimate estimate_pose(const CalibratedPlane& s1_ac,
                           const CalibratedPlane& s1_bd,
                           const CalibratedPlane& s2_ac,
                           const CalibratedPlane& s2_bd,
                           const CapacitanceSample& sample1,
                           const CapacitanceSample& sample2,
                           const RobotGeometry& geom, double sigma1_mm,
                           double sigma2_mm);

}  // namespace desens
