#include "desens/parasitic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace desens {

void ParasiticPose::validate() const {
  if (!std::isfinite(z_mm) || !std::isfinite(rot_out_of_plane_rad) ||
      !std::isfinite(rot_in_plane_rad))
    throw std::domain_error("parasitic pose: components must be finite");
  if (!(inner_radius_mm > 0.0) || !(outer_radius_mm > inner_radius_mm))
    throw std::domain_error(
        "parasitic pose: require 0 < inner_radius < outer_radius");
}

double height_gain_z_mm(double height_mm, double z_mm) {
  if (!(height_mm > 0.0))
    throw std::domain_error("height_gain_z: height must be > 0");
  if (!std::isfinite(z_mm))
    throw std::domain_error("height_gain_z: z must be finite");
  const double zz = z_mm * z_mm;
  return zz / (std::sqrt(height_mm * height_mm + zz) + height_mm);
}

double height_gain_rotation_mm(double height_mm, double inner_radius_mm,
                               double theta_rad) {
  if (!(height_mm > 0.0))
    throw std::domain_error("height_gain_rotation: height must be > 0");
  if (!(inner_radius_mm > 0.0))
    throw std::domain_error("height_gain_rotation: inner radius must be > 0");
  if (!std::isfinite(theta_rad))
    throw std::domain_error("height_gain_rotation: angle must be finite");
  // Law of cosines on (pivot, inner anchor, outer anchor) rewritten with
  // 1 - cos(theta) = 2 sin^2(theta/2):
  //   new_len^2 = h^2 + 4 ri (h + ri) sin^2(theta/2).
  const double s = std::sin(0.5 * theta_rad);
  const double q = 4.0 * inner_radius_mm * (height_mm + inner_radius_mm) * s * s;
  return q / (std::sqrt(height_mm * height_mm + q) + height_mm);
}

double apply_parasitic_gains_mm(double height_mm, double inner_radius_mm,
                                double rot_out_of_plane_rad, double z_mm) {
  double h = height_mm;
  h += height_gain_rotation_mm(h, inner_radius_mm, rot_out_of_plane_rad);
  h += height_gain_z_mm(h, z_mm);
  return h;
}

StretchReport stretch_feasible(const CellGeometry& cell, Interval y_range) {
  cell.validate();
  if (!std::isfinite(y_range.lo_mm) || !std::isfinite(y_range.hi_mm) ||
      y_range.lo_mm > y_range.hi_mm)
    throw std::domain_error("stretch_feasible: invalid interval");
  const double l0 = cell.unstretched_length_mm();
  StretchReport report;
  // Stretch is affine in y, so the extremes sit at the interval ends.
  report.min_stretch = (cell.initial_height_mm + y_range.lo_mm) / l0;
  report.max_stretch = (cell.initial_height_mm + y_range.hi_mm) / l0;
  report.ok = report.min_stretch >= 1.0 &&
              report.max_stretch <= cell.film.max_stretch;
  return report;
}

CancellationResult parasitic_cancellation_residual(const CellPair& pair,
                                                   const ParasiticPose& pose) {
  pair.validate();
  pose.validate();
  CancellationResult result;
  result.in_plane_rotation_modeled =
      std::abs(pose.rot_in_plane_rad) <= kSmallAngleLimitRad;

  const double h1 =
      apply_parasitic_gains_mm(pair.cell_1.initial_height_mm,
                               pose.inner_radius_mm, pose.rot_out_of_plane_rad,
                               pose.z_mm);
  const double h2 =
      apply_parasitic_gains_mm(pair.cell_2.initial_height_mm,
                               pose.inner_radius_mm, pose.rot_out_of_plane_rad,
                               pose.z_mm);
  const double k1 = pair.cell_1.k_pf_per_mm2();
  const double k2 = pair.cell_2.k_pf_per_mm2();
  result.residual_pf = (k1 * h1 * h1 - k2 * h2 * h2) - pair.initial_offset_pf();
  return result;
}

}  // namespace desens
