#pragma once

namespace desens {

/// Dielectric-elastomer membrane properties after biaxial pre-stretching.
///
/// Interface convention used throughout the library: lengths in mm,
/// capacitances in pF. Conversion to SI happens only inside the formula
/// kernels.
struct MaterialFilm {
  /// Vacuum permittivity, F/m.
  static constexpr double kVacuumPermittivity = 8.854e-12;

  double relative_permittivity = 3.2;
  /// Membrane thickness d0 in the pre-stretched, undisplaced state, mm.
  double initial_thickness_mm = 0.11;
  /// Biaxial pre-stretch ratio lambda0 applied when mounting the film.
  double pre_stretch = 3.0;
  /// Material stretch limit lambda_max (failure bound); the buckling bound
  /// is always 1 (film goes slack below its unstretched length).
  double max_stretch = 6.0;
  /// Stacked electrode layers; acts as a pure multiplier on capacitance
  /// (parallel plates), and therefore on sensitivity as well.
  int layer_count = 1;

  bool operator==(const MaterialFilm&) const = default;

  /// Throws std::domain_error on non-physical values.
  void validate() const;
};

}  // namespace desens
