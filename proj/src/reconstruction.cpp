#include "desens/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "desens/errors.hpp"

namespace desens {

void RobotGeometry::validate() const {
  if (!(plane_separation_mm > 0.0))
    throw std::domain_error("RobotGeometry: plane separation must be > 0 mm, got " +
                            std::to_string(plane_separation_mm));
  if (!(tip_extension_mm >= 0.0))
    throw std::domain_error("RobotGeometry: tip extension must be >= 0 mm, got " +
                            std::to_string(tip_extension_mm));
}

Vec2 reconstruct_xy(const CalibratedPlane& plane_ac,
                    const CalibratedPlane& plane_bd, double dc_ac_pf,
                    double dc_bd_pf) {
  const double a1 = plane_ac.alpha_pf_per_mm;
  const double b1 = plane_ac.beta_pf_per_mm;
  const double a2 = plane_bd.alpha_pf_per_mm;
  const double b2 = plane_bd.beta_pf_per_mm;
  const double det = a1 * b2 - a2 * b1;
  const double scale = std::max(std::abs(a1 * b2), std::abs(a2 * b1));
  if (!(std::abs(det) > 1e-12 * std::max(scale, 1e-300)))
    throw NumericError(
        "reconstruct_xy: calibration planes are near-parallel (determinant " +
        std::to_string(det) + "), position is unobservable");
  const double r1 = dc_ac_pf - plane_ac.gamma_pf;
  const double r2 = dc_bd_pf - plane_bd.gamma_pf;
  Vec2 p;
  p.x_mm = (r1 * b2 - r2 * b1) / det;
  p.y_mm = (a1 * r2 - a2 * r1) / det;
  return p;
}

Vec2 reconstruct_xy(const CalibratedPlane& plane_ac,
                    const CalibratedPlane& plane_bd,
                    const CapacitanceSample& sample) {
  return reconstruct_xy(plane_ac, plane_bd, dc_ac_pf(sample),
                        dc_bd_pf(sample));
}

Vec2 fuse_tip(const Vec2& est1, const Vec2& est2, const RobotGeometry& geom) {
  geom.validate();
  const double gain = geom.tip_extension_mm / geom.plane_separation_mm;
  Vec2 tip;
  tip.x_mm = est1.x_mm + gain * (est1.x_mm - est2.x_mm);
  tip.y_mm = est1.y_mm + gain * (est1.y_mm - est2.y_mm);
  return tip;
}

double propagate_error_mm(double sigma1_mm, double sigma2_mm,
                          const RobotGeometry& geom) {
  geom.validate();
  if (!(sigma1_mm >= 0.0) || !(sigma2_mm >= 0.0))
    throw std::domain_error("propagate_error_mm: sigmas must be >= 0 mm");
  const double g1 =
      (geom.tip_extension_mm + geom.plane_separation_mm) / geom.plane_separation_mm;
  const double g2 = geom.tip_extension_mm / geom.plane_separation_mm;
  return std::sqrt(g1 * g1 * sigma1_mm * sigma1_mm +
                   g2 * g2 * sigma2_mm * sigma2_mm);
}

double worst_case_error_mm(double max_dev_mm, const RobotGeometry& geom) {
  geom.validate();
  if (!(max_dev_mm >= 0.0))
    throw std::domain_error("worst_case_error_mm: max deviation must be >= 0 mm");
  const double g1 =
      (geom.tip_extension_mm + geom.plane_separation_mm) / geom.plane_separation_mm;
  const double g2 = geom.tip_extension_mm / geom.plane_separation_mm;
  return max_dev_mm * (g1 + g2);
}

PoseEstimate estimate_pose(const CalibratedPlane& s1_ac,
                           const CalibratedPlane& s1_bd,
                           const CalibratedPlane& s2_ac,
                           const CalibratedPlane& s2_bd,
                           const CapacitanceSample& sample1,
                           const CapacitanceSample& sample2,
                           const RobotGeometry& geom, double sigma1_mm,
                           double sigma2_mm) {
  PoseEstimate pose;
  pose.t_s = sample1.t_s;
  pose.sensor1 = reconstruct_xy(s1_ac, s1_bd, sample1);
  pose.sensor2 = reconstruct_xy(s2_ac, s2_bd, sample2);
  pose.tip = fuse_tip(pose.sensor1, pose.sensor2, geom);
  pose.tip_sigma_mm = propagate_error_mm(sigma1_mm, sigma2_mm, geom);
  pose.tilt_yz_rad = std::atan2(pose.sensor1.y_mm - pose.sensor2.y_mm,
                                geom.plane_separation_mm);
  pose.tilt_xz_rad = std::atan2(pose.sensor1.x_mm - pose.sensor2.x_mm,
                                geom.plane_separation_mm);
  return pose;
}

}  // namespace desens
