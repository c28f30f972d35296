#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "desens/layout.hpp"

namespace desens {

/// Private Gaussian stream of one protocol run, derived from (seed, run_id).
/// Identical (model, run_id) always reproduces the identical draw sequence;
/// distinct run ids give independent streams, so concurrent runs never share
/// state.
class NoiseStream {
 public:
  NoiseStream(const NoiseModel& model, std::uint64_t run_id);

  /// Next zero-mean draw, pF. A zero-std model returns 0 without consuming
  /// engine state.
  double next_pf();

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_;
  double std_pf_;
};

/// One virtual measurement of all four cells.
///
/// Pipeline per cell: commanded (x, y) -> sensor frame via the layout's
/// grid misalignment -> in-plane height h0 +/- axis displacement ->
/// parasitic height gains (rot_x, then rot_y, then z, sequentially) ->
/// stretch-bound check -> C = k h^2 -> + channel bias -> + noise.
/// Noise is drawn in fixed column order A, B, C, D.
///
/// Throws std::domain_error naming the cell and the violated bound when a
/// cell leaves [1, lambda_max] stretch. If `warnings` is non-null, a note is
/// appended when |rot_z| exceeds the small-angle regime (the in-plane
/// rotation is then ignored rather than extrapolated).
CapacitanceSample simulate_sample(const SensorLayout& layout,
                                  const FramePose& pose, double t_s = 0.0,
                                  NoiseStream* noise = nullptr,
                                  std::vector<std::string>* warnings = nullptr);

/// Rectangular measurement-grid protocol: points_per_axis^2 poses on a
/// square lattice spanning [-extent, +extent] per axis, optionally rotated
/// in-plane by tilt (commanded positions rotate with the jig and are
/// recorded rotated) and offset by a normal shim z. Samples are ordered
/// row-major (y outer, x inner) with logical relaxation timestamps
/// t = relax_s * (index + 1).
struct GridSpec {
  int set_id = 1;
  int points_per_axis = 7;
  double extent_mm = 15.0;
  double tilt_rad = 0.0;
  double shim_z_mm = 0.0;
  double relax_s = 20.0;

  /// Throws std::domain_error on degenerate values.
  void validate() const;
};

/// The standard three-set campaign: set 1 axis-aligned, set 2 the same
/// lattice tilted (default 22.5 deg), set 3 = set 1 on a normal shim
/// (default 3 mm).
std::vector<GridSpec> standard_grid_sets(int points_per_axis = 7,
                                         double extent_mm = 15.0,
                                         double tilt_rad = 0.39269908169872414,
                                         double shim_z_mm = 3.0);

struct GridRun {
  GridSpec spec;
  std::vector<CapacitanceSample> samples;
  std::vector<std::string> warnings;
};

/// Runs one grid set with a private noise stream (run_id = set_id).
/// Noise model std 0 (or a null model via `noiseless`) gives exact values.
GridRun run_grid_protocol(const SensorLayout& layout, const GridSpec& spec,
                          const NoiseModel& noise);
GridRun run_grid_protocol_noiseless(const SensorLayout& layout,
                                    const GridSpec& spec);

/// Sinusoidal single-axis protocol for gain/bandwidth studies: the bench
/// drives displacement d(t) = amplitude * sin(2 pi f t) along one sensor
/// axis and logs the aligned growing cell of that axis (bench-aligned, no
/// jig misalignment, no parasitics). samples_per_cycle uniform samples per
/// period over `cycles` full periods, t_n = n * dt, n = 0 .. N-1.
struct SineSpec {
  char axis = 'y';  // 'x' or 'y'
  double amplitude_mm = 2.0;
  double frequency_hz = 0.001;
  int cycles = 10;
  int samples_per_cycle = 100;
  std::uint64_t run_id = 100;

  /// Throws std::domain_error on degenerate values.
  void validate() const;
};

struct SinePoint {
  double t_s = 0.0;
  double disp_mm = 0.0;
  double c_pf = 0.0;
};

struct SineRun {
  SineSpec spec;
  std::vector<SinePoint> points;
};

/// Optional response-shaping hook applied to the clean capacitance before
/// bias and noise; the default identity keeps the simulator quasi-static
/// (the membrane is treated as relaxed at every sample). Lets callers
/// inject measured or synthetic dynamics without changing the simulator.
using CapacitanceFilter = std::function<double(double t_s, double c_pf)>;

SineRun run_sine_protocol(const SensorLayout& layout, const SineSpec& spec,
                          const NoiseModel& noise,
                          const CapacitanceFilter& filter = {});

}  // namespace desens
