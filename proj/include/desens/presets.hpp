#pragma once

#include "desens/config.hpp"

namespace desens {

/// Bundled example sensor definitions used by the tests, the acceptance
/// suite, and the shipped config files.

/// Acrylic membrane, 3x3 pre-stretched to 0.11 mm, stretch limit 6.
MaterialFilm default_film();

/// The reference trapezoid cell: bases 30/100 mm, height 55 mm.
CellGeometry prototype_cell();

/// Four identical reference cells, perfectly aligned jig, no bias: the
/// ideal device. Differential response is exactly linear and parasitic
/// motion cancels exactly.
SensorLayout nominal_layout();

/// A realistic as-built device: each pair carries a small equal-k height
/// split between its two cells (which leaves the response exactly planar
/// but shifts the rest offset), and the measurement jig is slightly
/// rotated. Constructed so that the true calibration planes are exactly
///   AC: alpha = +0.5, beta = -69.4, gamma = 31   (pF/mm, pF)
///   BD: alpha = -69.5, beta = alpha_AC-coupled,  gamma = 47
/// with the jig rotation atan(0.5/69.4) ~ 0.41 deg.
SensorLayout mismatched_layout();

/// True calibration planes implied by mismatched_layout(), for tests.
CalibratedPlane mismatched_truth_ac();
CalibratedPlane mismatched_truth_bd();

/// Noise model whose per-cell std makes a *differential* reading (the
/// difference of two independent cell reads) carry the given std.
NoiseModel noise_for_differential_std(double differential_std_pf,
                                      std::uint64_t seed);

/// Complete configs for the two bundled scenarios.
SensorConfig nominal_config();
SensorConfig mismatched_config();

}  // namespace desens
