#include "desens/presets.hpp"

#include <cmath>

namespace desens {

namespace {

/// pF/mm^2 per mm of mean base at the film's effective permittivity:
/// k = scale * b_mean, so b_mean = k / scale realizes a target k.
double k_per_base_mm(const MaterialFilm& film, double initial_height_mm) {
  const double eps_pf_per_mm =
      film.relative_permittivity * MaterialFilm::kVacuumPermittivity * 1e9;
  return eps_pf_per_mm * film.layer_count /
         (initial_height_mm * film.initial_thickness_mm);
}

/// Builds a cell of the given height whose quadratic coefficient is exactly
/// `k_target`, with the bases split in the reference 30:100 proportion.
CellGeometry cell_for_k(double k_target, double initial_height_mm,
                        const MaterialFilm& film) {
  CellGeometry cell;
  cell.film = film;
  cell.initial_height_mm = initial_height_mm;
  const double mean_base_mm =
      k_target / k_per_base_mm(film, initial_height_mm);
  cell.lower_base_mm = 2.0 * mean_base_mm * (30.0 / 130.0);
  cell.upper_base_mm = 2.0 * mean_base_mm * (100.0 / 130.0);
  return cell;
}

/// Equal-k pair with a symmetric height split: both cells share the
/// quadratic coefficient k (so the differential response stays exactly
/// planar), heights sum to 2 * center, and cell_2 - cell_1 height = split.
/// Rest offset = k * (h2^2 - h1^2) = k * split * 2 * center.
CellPair equal_k_pair(double k, double center_height_mm, double split_mm,
                      const MaterialFilm& film) {
  CellPair pair;
  pair.cell_1 = cell_for_k(k, center_height_mm - 0.5 * split_mm, film);
  pair.cell_2 = cell_for_k(k, center_height_mm + 0.5 * split_mm, film);
  return pair;
}

// Target as-built identification results (grid frame):
//   dC_AC = +0.5 x - 69.4 y + 31     dC_BD = -69.5 x + beta_x y + 47.
constexpr double kAlphaAc = 0.5;
constexpr double kBetaAc = -69.4;
constexpr double kGammaAc = 31.0;
constexpr double kAlphaBd = -69.5;
constexpr double kGammaBd = 47.0;
constexpr double kCenterHeightMm = 55.0;

}  // namespace

MaterialFilm default_film() { return MaterialFilm{}; }

CellGeometry prototype_cell() {
  CellGeometry cell;
  cell.film = default_film();
  return cell;  // defaults: bases 30/100 mm, height 55 mm
}

SensorLayout nominal_layout() {
  SensorLayout layout;
  const CellGeometry cell = prototype_cell();
  layout.pair_y = CellPair{cell, cell};
  layout.pair_x = CellPair{cell, cell};
  return layout;
}

SensorLayout mismatched_layout() {
  const MaterialFilm film = default_film();
  SensorLayout layout;

  // The jig rotation phi turns a pure grid-y sweep into a small x-pair
  // response; its size is fixed by the identified cross-slope:
  // alpha_AC = S_y sin(phi), beta_AC = -S_y cos(phi) with a sensor-frame
  // y-pair slope of -S_y (the cell that grows with +y is read on column C).
  const double phi = std::atan2(kAlphaAc, -kBetaAc);
  layout.grid_misalignment_rad = phi;

  // Pair along y, growing cell on column C.
  layout.y_growing_is_a = false;
  const double slope_y = std::hypot(kAlphaAc, kBetaAc);  // S_y, pF/mm
  const double k_y = slope_y / (4.0 * kCenterHeightMm);
  const double split_y = kGammaAc / (k_y * 2.0 * kCenterHeightMm);
  layout.pair_y = equal_k_pair(k_y, kCenterHeightMm, split_y, film);

  // Pair along x, growing cell on column D:
  // alpha_BD = -S_x cos(phi) => S_x = -alpha_BD / cos(phi).
  layout.x_growing_is_b = false;
  const double slope_x = -kAlphaBd / std::cos(phi);
  const double k_x = slope_x / (4.0 * kCenterHeightMm);
  const double split_x = kGammaBd / (k_x * 2.0 * kCenterHeightMm);
  layout.pair_x = equal_k_pair(k_x, kCenterHeightMm, split_x, film);

  return layout;
}

CalibratedPlane mismatched_truth_ac() {
  CalibratedPlane plane;
  plane.alpha_pf_per_mm = kAlphaAc;
  plane.beta_pf_per_mm = kBetaAc;
  plane.gamma_pf = kGammaAc;
  return plane;
}

CalibratedPlane mismatched_truth_bd() {
  CalibratedPlane plane;
  const double phi = std::atan2(kAlphaAc, -kBetaAc);
  plane.alpha_pf_per_mm = kAlphaBd;
  plane.beta_pf_per_mm = kAlphaBd * std::tan(phi);
  plane.gamma_pf = kGammaBd;
  return plane;
}

NoiseModel noise_for_differential_std(double differential_std_pf,
                                      std::uint64_t seed) {
  NoiseModel model;
  // Var(c1 - c2) = 2 var(cell) => per-cell std = differential std / sqrt(2).
  model.std_pf = differential_std_pf / std::sqrt(2.0);
  model.seed = seed;
  model.validate();
  return model;
}

SensorConfig nominal_config() {
  SensorConfig config;
  config.layout = nominal_layout();
  return config;
}

SensorConfig mismatched_config() {
  SensorConfig config;
  config.layout = mismatched_layout();
  config.noise = noise_for_differential_std(10.0, 0);
  return config;
}

}  // namespace desens
