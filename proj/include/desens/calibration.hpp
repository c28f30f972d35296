#pragma once

#include <span>
#include <string>

#include "desens/layout.hpp"

namespace desens {

/// Which in-plane axis a differential pair primarily senses.
enum class Axis { x, y };

/// One calibration observation: commanded in-plane position and the
/// differential reading of a pair.
struct PlaneSample {
  double x_mm = 0.0;
  double y_mm = 0.0;
  double dc_pf = 0.0;
};

/// Affine plane dC(x, y) = alpha x + beta y + gamma fitted to one pair.
struct CalibratedPlane {
  double alpha_pf_per_mm = 0.0;
  double beta_pf_per_mm = 0.0;
  double gamma_pf = 0.0;
  /// Population RMS of the fit residuals, pF.
  double fit_rms_pf = 0.0;
  /// Spectral condition estimate (ratio of extreme eigenvalues) of the
  /// displacement block of the mean-centered, variance-scaled normal system;
  /// large values signal near-collinear calibration positions.
  double condition_indicator = 0.0;
};

/// Least-squares plane through >= 3 non-collinear samples. Inputs are
/// mean-centered and variance-scaled before the 3x3 normal equations are
/// solved by Gaussian elimination with partial pivoting; coefficients are
/// mapped back to physical units afterwards. Duplicate positions act as
/// weights. Throws NumericError on rank deficiency (summary of the offending
/// design moments included in the message).
CalibratedPlane fit_plane(std::span<const PlaneSample> samples);

/// One-cell calibration observation along the growing axis of that cell.
struct ParabolaSample {
  double y_mm = 0.0;
  double c_pf = 0.0;
};

/// One-cell quadratic response C(y) = (C0 / h0^2) (h0 + y)^2.
struct CalibratedParabola {
  double c0_pf = 0.0;
  double h0_mm = 0.0;
  /// Population RMS of the residuals against the reparameterized model, pF.
  double fit_rms_pf = 0.0;
};

/// Fits the one-cell response by an unconstrained quadratic
/// c2 y^2 + c1 y + c0 (centered/scaled normal equations, as fit_plane), then
/// extracts h0 = c1 / (2 c2) and C0 = c0. Requires >= 3 distinct y values.
/// Throws NumericError when c2 <= 0 (surface not convex: data does not match
/// the quadratic cell model), or when the extracted h0 or C0 is
/// non-positive (cell measured against its shrinking axis: flip the
/// displacement sign and refit).
CalibratedParabola fit_parabola(std::span<const ParabolaSample> samples);

/// Reconstruction-deviation summary of one calibration/evaluation set pair,
/// in millimetres of primary-axis displacement.
struct DeviationReport {
  std::string calibration_set;
  std::string evaluation_set;
  int n_points = 0;
  double rms_mm = 0.0;
  double max_mm = 0.0;
};

/// Inverts `plane` along the pair's primary axis for every evaluation
/// sample, substituting the known true secondary coordinate:
///   primary_rec = (dC - gamma - cross_slope * secondary_true) / primary_slope
/// and reports RMS and max |primary_rec - primary_true|. Requires the
/// primary slope to dominate: |primary| > 10 |cross|, else NumericError
/// (plane not invertible along that axis).
DeviationReport deviation(const CalibratedPlane& plane,
                          std::span<const PlaneSample> samples,
                          Axis primary_axis, std::string calibration_set,
                          std::string evaluation_set);

/// Differential readings of a sample under the fixed column conventions
/// dC_AC = cA - cC and dC_BD = cB - cD.
double dc_ac_pf(const CapacitanceSample& s);
double dc_bd_pf(const CapacitanceSample& s);

}  // namespace desens
