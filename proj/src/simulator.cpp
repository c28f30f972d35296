#include "desens/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "desens/parasitic.hpp"

namespace desens {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

struct CellState {
  char name;
  const CellGeometry* geom;
  double height_mm;
};

}  // namespace

void NoiseModel::validate() const {
  if (!std::isfinite(std_pf) || std_pf < 0.0)
    throw std::domain_error("noise: std_pf must be finite and >= 0");
}

NoiseStream::NoiseStream(const NoiseModel& model, std::uint64_t run_id)
    : dist_(0.0, model.std_pf > 0.0 ? model.std_pf : 1.0),
      std_pf_(model.std_pf) {
  model.validate();
  std::seed_seq seq{
      static_cast<std::uint32_t>(model.seed),
      static_cast<std::uint32_t>(model.seed >> 32),
      static_cast<std::uint32_t>(run_id),
      static_cast<std::uint32_t>(run_id >> 32),
  };
  engine_.seed(seq);
}

double NoiseStream::next_pf() {
  if (std_pf_ <= 0.0) return 0.0;
  return dist_(engine_);
}

void GridSpec::validate() const {
  require(points_per_axis >= 1, "grid: points_per_axis must be >= 1");
  require(std::isfinite(extent_mm) && extent_mm >= 0.0,
          "grid: extent_mm must be >= 0");
  require(std::isfinite(tilt_rad) && std::isfinite(shim_z_mm),
          "grid: tilt and shim must be finite");
  require(std::isfinite(relax_s) && relax_s >= 0.0,
          "grid: relax_s must be >= 0");
}

void SineSpec::validate() const {
  require(axis == 'x' || axis == 'y', "sine: axis must be 'x' or 'y'");
  require(std::isfinite(amplitude_mm) && amplitude_mm >= 0.0,
          "sine: amplitude must be >= 0");
  require(std::isfinite(frequency_hz) && frequency_hz > 0.0,
          "sine: frequency must be > 0");
  require(cycles >= 1, "sine: cycles must be >= 1");
  require(samples_per_cycle >= 4, "sine: samples_per_cycle must be >= 4");
}

void SensorLayout::validate() const {
  pair_y.validate();
  pair_x.validate();
  if (!(inner_radius_mm > 0.0) || !(outer_radius_mm > inner_radius_mm))
    throw std::domain_error(
        "layout: require 0 < inner_radius < outer_radius");
  if (!std::isfinite(grid_misalignment_rad) ||
      std::abs(grid_misalignment_rad) >= kSmallAngleLimitRad)
    throw std::domain_error(
        "layout: grid misalignment must stay within the small-angle regime "
        "(|phi| < 10 deg)");
  for (double b : cell_bias_pf)
    if (!std::isfinite(b))
      throw std::domain_error("layout: cell bias must be finite");
}

CapacitanceSample simulate_sample(const SensorLayout& layout,
                                  const FramePose& pose, double t_s,
                                  NoiseStream* noise,
                                  std::vector<std::string>* warnings) {
  layout.validate();
  require(std::isfinite(pose.x_mm) && std::isfinite(pose.y_mm) &&
              std::isfinite(pose.z_mm) && std::isfinite(pose.rot_x_rad) &&
              std::isfinite(pose.rot_y_rad) && std::isfinite(pose.rot_z_rad),
          "pose: components must be finite");

  if (std::abs(pose.rot_z_rad) > kSmallAngleLimitRad && warnings != nullptr)
    warnings->push_back(
        "in-plane rotation of " + std::to_string(pose.rot_z_rad) +
        " rad exceeds the small-angle regime; its effect is not modeled");

  // Commanded grid position in the sensor frame.
  const double c = std::cos(layout.grid_misalignment_rad);
  const double s = std::sin(layout.grid_misalignment_rad);
  const double xs = pose.x_mm * c + pose.y_mm * s;
  const double ys = -pose.x_mm * s + pose.y_mm * c;

  const CellPair& py = layout.pair_y;
  const CellPair& px = layout.pair_x;
  CellState cells[4] = {
      {layout.y_growing_is_a ? 'A' : 'C', &py.cell_1,
       py.cell_1.initial_height_mm + ys},
      {layout.y_growing_is_a ? 'C' : 'A', &py.cell_2,
       py.cell_2.initial_height_mm - ys},
      {layout.x_growing_is_b ? 'B' : 'D', &px.cell_1,
       px.cell_1.initial_height_mm + xs},
      {layout.x_growing_is_b ? 'D' : 'B', &px.cell_2,
       px.cell_2.initial_height_mm - xs},
  };

  double c_by_column[4] = {0.0, 0.0, 0.0, 0.0};  // A, B, C, D
  for (CellState& cell : cells) {
    if (cell.height_mm <= 0.0)
      throw std::domain_error(std::string("cell ") + cell.name +
                              " collapsed at commanded pose");
    // Out-of-plane rotations first (x then y, treated with the same lever
    // geometry), then the normal translation on the rotation-augmented
    // height.
    double h = cell.height_mm;
    h += height_gain_rotation_mm(h, layout.inner_radius_mm, pose.rot_x_rad);
    h += height_gain_rotation_mm(h, layout.inner_radius_mm, pose.rot_y_rad);
    h += height_gain_z_mm(h, pose.z_mm);

    const double stretch = h / cell.geom->unstretched_length_mm();
    if (stretch < 1.0)
      throw std::domain_error(
          std::string("cell ") + cell.name + " stretch " +
          std::to_string(stretch) +
          " below buckling limit 1 (film goes slack) at commanded pose");
    if (stretch > cell.geom->film.max_stretch)
      throw std::domain_error(std::string("cell ") + cell.name + " stretch " +
                              std::to_string(stretch) +
                              " above material limit " +
                              std::to_string(cell.geom->film.max_stretch) +
                              " at commanded pose");

    const double value =
        cell_capacitance_pf(*cell.geom, h - cell.geom->initial_height_mm);
    c_by_column[cell.name - 'A'] = value;
  }

  CapacitanceSample sample;
  sample.true_pose = pose;
  sample.t_s = t_s;
  // Noise is drawn in fixed column order A, B, C, D so a layout flag flip
  // never reshuffles the stream.
  sample.c_a_pf = c_by_column[0] + layout.cell_bias_pf[0] +
                  (noise != nullptr ? noise->next_pf() : 0.0);
  sample.c_b_pf = c_by_column[1] + layout.cell_bias_pf[1] +
                  (noise != nullptr ? noise->next_pf() : 0.0);
  sample.c_c_pf = c_by_column[2] + layout.cell_bias_pf[2] +
                  (noise != nullptr ? noise->next_pf() : 0.0);
  sample.c_d_pf = c_by_column[3] + layout.cell_bias_pf[3] +
                  (noise != nullptr ? noise->next_pf() : 0.0);
  return sample;
}

std::vector<GridSpec> standard_grid_sets(int points_per_axis, double extent_mm,
                                         double tilt_rad, double shim_z_mm) {
  GridSpec set1{1, points_per_axis, extent_mm, 0.0, 0.0, 20.0};
  GridSpec set2{2, points_per_axis, extent_mm, tilt_rad, 0.0, 20.0};
  GridSpec set3{3, points_per_axis, extent_mm, 0.0, shim_z_mm, 20.0};
  return {set1, set2, set3};
}

GridRun run_grid_protocol(const SensorLayout& layout, const GridSpec& spec,
                          const NoiseModel& noise) {
  layout.validate();
  spec.validate();
  noise.validate();
  NoiseStream stream(noise, static_cast<std::uint64_t>(spec.set_id));
  const bool noiseless = noise.std_pf <= 0.0;

  GridRun run;
  run.spec = spec;
  const int n = spec.points_per_axis;
  const double step = n > 1 ? 2.0 * spec.extent_mm / (n - 1) : 0.0;
  const double ct = std::cos(spec.tilt_rad);
  const double st = std::sin(spec.tilt_rad);
  int index = 0;
  for (int iy = 0; iy < n; ++iy) {
    const double gy = -spec.extent_mm + iy * step;
    for (int ix = 0; ix < n; ++ix, ++index) {
      const double gx = -spec.extent_mm + ix * step;
      FramePose pose;
      // The tilted jig carries its lattice with it; commanded positions are
      // recorded in the common (set 1) frame.
      pose.x_mm = gx * ct - gy * st;
      pose.y_mm = gx * st + gy * ct;
      pose.z_mm = spec.shim_z_mm;
      const double t = spec.relax_s * (index + 1);
      run.samples.push_back(simulate_sample(layout, pose, t,
                                            noiseless ? nullptr : &stream,
                                            &run.warnings));
    }
  }
  return run;
}

GridRun run_grid_protocol_noiseless(const SensorLayout& layout,
                                    const GridSpec& spec) {
  NoiseModel off;
  off.std_pf = 0.0;
  return run_grid_protocol(layout, spec, off);
}

SineRun run_sine_protocol(const SensorLayout& layout, const SineSpec& spec,
                          const NoiseModel& noise,
                          const CapacitanceFilter& filter) {
  layout.validate();
  spec.validate();
  noise.validate();
  NoiseStream stream(noise, spec.run_id);
  const bool noiseless = noise.std_pf <= 0.0;

  // Bench-aligned single-cell drive: the motion axis coincides with the
  // growing cell of the selected pair; no jig misalignment, no parasitics.
  const bool is_y = spec.axis == 'y';
  const CellGeometry& cell = is_y ? layout.pair_y.cell_1 : layout.pair_x.cell_1;
  const StretchReport reach =
      stretch_feasible(cell, {-spec.amplitude_mm, spec.amplitude_mm});
  if (!reach.ok)
    throw std::domain_error(
        "sine amplitude drives the cell outside its stretch bounds [1, " +
        std::to_string(cell.film.max_stretch) + "]: reaches [" +
        std::to_string(reach.min_stretch) + ", " +
        std::to_string(reach.max_stretch) + "]");
  const char column = is_y ? (layout.y_growing_is_a ? 'A' : 'C')
                           : (layout.x_growing_is_b ? 'B' : 'D');
  const double bias = layout.cell_bias_pf[column - 'A'];

  SineRun run;
  run.spec = spec;
  const int total = spec.cycles * spec.samples_per_cycle;
  const double dt = 1.0 / (spec.frequency_hz * spec.samples_per_cycle);
  const double omega = 2.0 * 3.141592653589793238462643383279502884 *
                       spec.frequency_hz;
  run.points.reserve(total);
  for (int i = 0; i < total; ++i) {
    const double t = i * dt;
    const double disp = spec.amplitude_mm * std::sin(omega * t);
    double c = cell_capacitance_pf(cell, disp);
    if (filter) c = filter(t, c);
    c += bias + (noiseless ? 0.0 : stream.next_pf());
    run.points.push_back(SinePoint{t, disp, c});
  }
  return run;
}

}  // namespace desens
