// desens: command-line front end for the differential-elastomer position
// sensor library. Subcommands cover the full workflow: simulate measurement
// campaigns, calibrate planes from sample data, cross-evaluate calibrations,
// reconstruct guide poses, estimate the frequency response, propagate tip
// uncertainty, and sweep candidate cell designs.
//
// Exit codes: 0 success, 2 configuration/CLI errors, 3 numeric/domain
// errors, 4 file I/O errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "desens/calibration.hpp"
#include "desens/config.hpp"
#include "desens/csv.hpp"
#include "desens/design.hpp"
#include "desens/errors.hpp"
#include "desens/gain.hpp"
#include "desens/presets.hpp"
#include "desens/reconstruction.hpp"
#include "desens/simulator.hpp"

namespace {

using desens::ConfigError;
using desens::IoError;
using desens::NumericError;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Shared option plumbing

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise_std_pf;
  std::optional<double> misalignment_rad;
  std::optional<int> grid_points;
  std::optional<double> grid_extent_mm;
  std::optional<double> grid_tilt_rad;
  std::optional<double> grid_shim_mm;
  std::optional<double> grid_relax_s;
  std::optional<double> plane_separation_mm;
  std::optional<double> tip_extension_mm;
};

void add_config_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "Sensor config JSON (defaults to the built-in nominal "
                  "sensor when omitted)");
  cmd->add_option("--seed", opts.seed, "Override noise.seed");
  cmd->add_option("--noise-std", opts.noise_std_pf,
                  "Override noise.std_pf (per-cell std, pF; 0 = noiseless)");
  cmd->add_option("--misalignment-rad", opts.misalignment_rad,
                  "Override layout.grid_misalignment_rad");
  cmd->add_option("--points", opts.grid_points,
                  "Override grid.points_per_axis");
  cmd->add_option("--extent", opts.grid_extent_mm, "Override grid.extent_mm");
  cmd->add_option("--tilt-rad", opts.grid_tilt_rad, "Override grid.tilt_rad");
  cmd->add_option("--shim-z", opts.grid_shim_mm, "Override grid.shim_z_mm");
  cmd->add_option("--relax", opts.grid_relax_s, "Override grid.relax_s");
  cmd->add_option("--plane-separation", opts.plane_separation_mm,
                  "Override robot.plane_separation_mm");
  cmd->add_option("--tip-extension", opts.tip_extension_mm,
                  "Override robot.tip_extension_mm");
}

desens::SensorConfig resolve_config(const CommonOpts& opts) {
  desens::SensorConfig config = opts.config_path.empty()
                                    ? desens::nominal_config()
                                    : desens::load_sensor_config(opts.config_path);
  if (opts.seed) config.noise.seed = *opts.seed;
  if (opts.noise_std_pf) config.noise.std_pf = *opts.noise_std_pf;
  if (opts.misalignment_rad)
    config.layout.grid_misalignment_rad = *opts.misalignment_rad;
  if (opts.grid_points) config.grid.points_per_axis = *opts.grid_points;
  if (opts.grid_extent_mm) config.grid.extent_mm = *opts.grid_extent_mm;
  if (opts.grid_tilt_rad) config.grid.tilt_rad = *opts.grid_tilt_rad;
  if (opts.grid_shim_mm) config.grid.shim_z_mm = *opts.grid_shim_mm;
  if (opts.grid_relax_s) config.grid.relax_s = *opts.grid_relax_s;
  if (opts.plane_separation_mm)
    config.robot.plane_separation_mm = *opts.plane_separation_mm;
  if (opts.tip_extension_mm)
    config.robot.tip_extension_mm = *opts.tip_extension_mm;
  // Flag values go through the same semantic checks as file values.
  try {
    config.layout.validate();
    config.noise.validate();
    config.robot.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config override: ") + e.what());
  }
  return config;
}

/// Writes `content` to `path`, or to stdout when path is empty.
void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    desens::write_text_file(path, content);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  CommonOpts common;
  std::string protocol = "grid";
  std::vector<int> sets{1, 2, 3};
  std::string output_path;
  std::string plot_prefix;
};

std::vector<desens::GridSpec> selected_grid_specs(
    const desens::SensorConfig& config, const std::vector<int>& sets) {
  std::vector<desens::GridSpec> all = desens::standard_grid_sets(
      config.grid.points_per_axis, config.grid.extent_mm, config.grid.tilt_rad,
      config.grid.shim_z_mm);
  for (desens::GridSpec& spec : all) spec.relax_s = config.grid.relax_s;
  std::vector<desens::GridSpec> chosen;
  for (int id : sets) {
    bool found = false;
    for (const desens::GridSpec& spec : all)
      if (spec.set_id == id) {
        chosen.push_back(spec);
        found = true;
      }
    if (!found)
      throw ConfigError("simulate: unknown set id " + std::to_string(id) +
                        " (available: 1 aligned, 2 tilted, 3 shimmed)");
  }
  return chosen;
}

void write_plot_data(const std::string& prefix,
                     const std::vector<desens::GridRun>& runs) {
  std::ostringstream cells;
  std::ostringstream diff;
  cells << "set,x_mm,y_mm,cA_pF,cB_pF,cC_pF,cD_pF\n";
  diff << "set,x_mm,y_mm,dAC_pF,dBD_pF\n";
  using desens::format_g6;
  for (const desens::GridRun& run : runs)
    for (const desens::CapacitanceSample& s : run.samples) {
      cells << run.spec.set_id << ',' << format_g6(s.true_pose.x_mm) << ','
            << format_g6(s.true_pose.y_mm) << ',' << format_g6(s.c_a_pf) << ','
            << format_g6(s.c_b_pf) << ',' << format_g6(s.c_c_pf) << ','
            << format_g6(s.c_d_pf) << '\n';
      diff << run.spec.set_id << ',' << format_g6(s.true_pose.x_mm) << ','
           << format_g6(s.true_pose.y_mm) << ','
           << format_g6(desens::dc_ac_pf(s)) << ','
           << format_g6(desens::dc_bd_pf(s)) << '\n';
    }
  desens::write_text_file(prefix + "_cells.csv", cells.str());
  desens::write_text_file(prefix + "_diff.csv", diff.str());
}

// One spec per campaign frequency, each with its own noise stream.
desens::SineSpec sine_spec_for(const desens::SensorConfig& config,
                               std::size_t index) {
  desens::SineSpec spec;
  spec.axis = config.sine.axis;
  spec.amplitude_mm = config.sine.amplitude_mm;
  spec.frequency_hz = config.sine.frequencies_hz[index];
  spec.cycles = config.sine.cycles;
  spec.samples_per_cycle = config.sine.samples_per_cycle;
  spec.run_id = 100 + static_cast<std::uint64_t>(index);
  return spec;
}

void run_simulate(const SimulateOpts& opts) {
  const desens::SensorConfig config = resolve_config(opts.common);

  if (opts.protocol == "grid") {
    const auto specs = selected_grid_specs(config, opts.sets);
    // Feasibility dry run: a protocol that drives any cell outside its
    // stretch bounds is a configuration problem, not a runtime surprise.
    for (const desens::GridSpec& spec : specs) {
      try {
        (void)desens::run_grid_protocol_noiseless(config.layout, spec);
      } catch (const std::domain_error& e) {
        throw ConfigError("simulate: set " + std::to_string(spec.set_id) +
                          " is infeasible for this sensor: " + e.what());
      }
    }
    std::vector<desens::GridRun> runs;
    std::vector<desens::SampleRow> rows;
    for (const desens::GridSpec& spec : specs) {
      runs.push_back(desens::run_grid_protocol(config.layout, spec, config.noise));
      print_warnings(runs.back().warnings);
      for (std::size_t i = 0; i < runs.back().samples.size(); ++i)
        rows.push_back({runs.back().spec.set_id, static_cast<int>(i),
                        runs.back().samples[i]});
    }
    std::ostringstream out;
    desens::write_samples_csv(out, rows);
    emit(opts.output_path, out.str());
    if (!opts.plot_prefix.empty()) write_plot_data(opts.plot_prefix, runs);
    return;
  }

  if (opts.protocol == "sine") {
    std::vector<desens::SineRun> runs;
    for (std::size_t i = 0; i < config.sine.frequencies_hz.size(); ++i) {
      const double freq = config.sine.frequencies_hz[i];
      const desens::SineSpec spec = sine_spec_for(config, i);
      try {
        desens::NoiseModel off;
        off.std_pf = 0.0;
        off.seed = config.noise.seed;
        (void)desens::run_sine_protocol(config.layout, spec, off);
      } catch (const std::domain_error& e) {
        throw ConfigError("simulate: sine at " + std::to_string(freq) +
                          " Hz is infeasible for this sensor: " + e.what());
      }
      runs.push_back(desens::run_sine_protocol(config.layout, spec, config.noise));
    }
    std::ostringstream out;
    desens::write_sine_csv(out, runs);
    emit(opts.output_path, out.str());
    return;
  }

  throw ConfigError("simulate: unknown protocol '" + opts.protocol +
                    "' (expected 'grid' or 'sine')");
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateOpts {
  std::string input_path;
  std::string output_path;
  std::string mode = "plane";
};

std::vector<desens::SampleRow> load_samples(const std::string& path) {
  std::istringstream in(desens::read_text_file(path));
  return desens::read_samples_csv(in);
}

std::map<int, std::vector<desens::SampleRow>> group_by_set(
    const std::vector<desens::SampleRow>& rows) {
  std::map<int, std::vector<desens::SampleRow>> by_set;
  for (const desens::SampleRow& row : rows) by_set[row.set].push_back(row);
  return by_set;
}

std::vector<desens::PlaneSample> plane_samples(
    const std::vector<desens::SampleRow>& rows, bool pair_ac) {
  std::vector<desens::PlaneSample> out;
  out.reserve(rows.size());
  for (const desens::SampleRow& row : rows)
    out.push_back({row.sample.true_pose.x_mm, row.sample.true_pose.y_mm,
                   pair_ac ? desens::dc_ac_pf(row.sample)
                           : desens::dc_bd_pf(row.sample)});
  return out;
}

json plane_to_json(const std::string& set, const std::string& pair,
                   const desens::CalibratedPlane& plane, int n_points) {
  json entry;
  entry["set"] = set;
  entry["pair"] = pair;
  entry["alpha_pf_per_mm"] = plane.alpha_pf_per_mm;
  entry["beta_pf_per_mm"] = plane.beta_pf_per_mm;
  entry["gamma_pf"] = plane.gamma_pf;
  entry["fit_rms_pf"] = plane.fit_rms_pf;
  entry["condition_indicator"] = plane.condition_indicator;
  entry["n_points"] = n_points;
  return entry;
}

void run_calibrate_plane(const CalibrateOpts& opts) {
  const auto rows = load_samples(opts.input_path);
  if (rows.empty()) throw ConfigError("calibrate: no samples in " + opts.input_path);
  auto by_set = group_by_set(rows);

  json doc;
  doc["calibrations"] = json::array();
  std::ostringstream table;
  table << "set   pair  alpha_pF/mm     beta_pF/mm      gamma_pF        "
           "fit_rms_pF     n\n";
  auto add = [&](const std::string& set_name,
                 const std::vector<desens::SampleRow>& set_rows) {
    for (const bool pair_ac : {true, false}) {
      const auto samples = plane_samples(set_rows, pair_ac);
      const desens::CalibratedPlane plane = desens::fit_plane(samples);
      const std::string pair = pair_ac ? "ac" : "bd";
      doc["calibrations"].push_back(
          plane_to_json(set_name, pair, plane, static_cast<int>(samples.size())));
      char line[160];
      std::snprintf(line, sizeof(line), "%-5s %-5s %-15.6g %-15.6g %-15.6g %-14.6g %zu\n",
                    set_name.c_str(), pair_ac ? "AC" : "BD",
                    plane.alpha_pf_per_mm, plane.beta_pf_per_mm, plane.gamma_pf,
                    plane.fit_rms_pf, samples.size());
      table << line;
    }
  };
  for (const auto& [set_id, set_rows] : by_set)
    add(std::to_string(set_id), set_rows);
  if (by_set.size() > 1) add("all", rows);

  const std::string json_text = doc.dump(2) + "\n";
  if (opts.output_path.empty()) {
    std::cout << json_text;
  } else {
    desens::write_text_file(opts.output_path, json_text);
    std::cout << table.str();
  }
}

void run_calibrate_cells(const CalibrateOpts& opts) {
  const auto rows = load_samples(opts.input_path);
  if (rows.empty()) throw ConfigError("calibrate: no samples in " + opts.input_path);

  json doc;
  doc["cells"] = json::array();
  struct CellChannel {
    const char* cell;
    char axis;
  };
  for (const CellChannel ch : {CellChannel{"A", 'y'}, CellChannel{"B", 'x'},
                               CellChannel{"C", 'y'}, CellChannel{"D", 'x'}}) {
    std::vector<desens::ParabolaSample> samples;
    samples.reserve(rows.size());
    for (const desens::SampleRow& row : rows) {
      const double disp = ch.axis == 'y' ? row.sample.true_pose.y_mm
                                         : row.sample.true_pose.x_mm;
      double c = 0.0;
      switch (ch.cell[0]) {
        case 'A': c = row.sample.c_a_pf; break;
        case 'B': c = row.sample.c_b_pf; break;
        case 'C': c = row.sample.c_c_pf; break;
        default: c = row.sample.c_d_pf; break;
      }
      samples.push_back({disp, c});
    }
    // The quadratic model assumes the cell grows with +displacement; a cell
    // mounted the other way round fits after flipping the sign.
    int orientation = 1;
    desens::CalibratedParabola parab;
    try {
      parab = desens::fit_parabola(samples);
    } catch (const NumericError&) {
      orientation = -1;
      for (desens::ParabolaSample& s : samples) s.y_mm = -s.y_mm;
      parab = desens::fit_parabola(samples);
    }
    json entry;
    entry["cell"] = ch.cell;
    entry["axis"] = std::string(1, ch.axis);
    entry["orientation"] = orientation;
    entry["h0_mm"] = parab.h0_mm;
    entry["c0_pf"] = parab.c0_pf;
    entry["k_pf_per_mm2"] = parab.c0_pf / (parab.h0_mm * parab.h0_mm);
    entry["fit_rms_pf"] = parab.fit_rms_pf;
    entry["n_points"] = samples.size();
    doc["cells"].push_back(entry);
  }
  emit(opts.output_path, doc.dump(2) + "\n");
}

void run_calibrate(const CalibrateOpts& opts) {
  if (opts.mode == "plane")
    run_calibrate_plane(opts);
  else if (opts.mode == "cells")
    run_calibrate_cells(opts);
  else
    throw ConfigError("calibrate: unknown mode '" + opts.mode +
                      "' (expected 'plane' or 'cells')");
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOpts {
  std::string input_path;
  std::string output_path;
};

void run_evaluate(const EvaluateOpts& opts) {
  const auto rows = load_samples(opts.input_path);
  if (rows.empty()) throw ConfigError("evaluate: no samples in " + opts.input_path);
  auto by_set = group_by_set(rows);
  if (by_set.empty()) throw ConfigError("evaluate: no sets in " + opts.input_path);

  std::vector<std::pair<std::string, desens::DeviationReport>> reports;
  double off_diag_sum[2] = {0.0, 0.0};
  int off_diag_n[2] = {0, 0};
  for (const bool pair_ac : {true, false}) {
    for (const auto& [cal_id, cal_rows] : by_set) {
      const desens::CalibratedPlane plane =
          desens::fit_plane(plane_samples(cal_rows, pair_ac));
      for (const auto& [eval_id, eval_rows] : by_set) {
        const auto samples = plane_samples(eval_rows, pair_ac);
        desens::DeviationReport report = desens::deviation(
            plane, samples, pair_ac ? desens::Axis::y : desens::Axis::x,
            std::to_string(cal_id), std::to_string(eval_id));
        if (cal_id != eval_id) {
          off_diag_sum[pair_ac ? 0 : 1] += report.rms_mm;
          ++off_diag_n[pair_ac ? 0 : 1];
        }
        reports.emplace_back(pair_ac ? "ac" : "bd", std::move(report));
      }
    }
  }
  std::ostringstream out;
  desens::write_deviation_csv(out, reports);
  emit(opts.output_path, out.str());
  if (!opts.output_path.empty()) {
    for (int i = 0; i < 2; ++i)
      if (off_diag_n[i] > 0)
        std::cout << "mean cross-set deviation RMS (" << (i == 0 ? "ac" : "bd")
                  << "): "
                  << desens::format_g6(off_diag_sum[i] / off_diag_n[i])
                  << " mm over " << off_diag_n[i] << " pairings\n";
  }
}

// ---------------------------------------------------------------------------
// reconstruct

struct ReconstructOpts {
  CommonOpts common;
  std::string calib_path;
  std::string calib2_path;
  std::string input_path;
  std::string input2_path;
  std::string output_path;
  std::string set_name = "all";
  std::optional<double> sigma1_mm;
  std::optional<double> sigma2_mm;
};

struct PlanePairCal {
  desens::CalibratedPlane ac;
  desens::CalibratedPlane bd;
};

PlanePairCal load_calibration(const std::string& path,
                              const std::string& set_name) {
  json doc;
  try {
    doc = json::parse(desens::read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("reconstruct: invalid calibration JSON in " + path +
                      ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("calibrations") ||
      !doc["calibrations"].is_array())
    throw ConfigError("reconstruct: " + path +
                      " has no 'calibrations' array (expected the output of "
                      "'calibrate --mode plane')");
  PlanePairCal cal;
  bool have_ac = false, have_bd = false;
  for (const json& entry : doc["calibrations"]) {
    if (!entry.is_object()) continue;
    if (entry.value("set", "") != set_name) continue;
    desens::CalibratedPlane plane;
    try {
      plane.alpha_pf_per_mm = entry.at("alpha_pf_per_mm").get<double>();
      plane.beta_pf_per_mm = entry.at("beta_pf_per_mm").get<double>();
      plane.gamma_pf = entry.at("gamma_pf").get<double>();
      plane.fit_rms_pf = entry.value("fit_rms_pf", 0.0);
    } catch (const json::exception& e) {
      throw ConfigError("reconstruct: malformed calibration entry in " + path +
                        ": " + e.what());
    }
    const std::string pair = entry.value("pair", "");
    if (pair == "ac") {
      cal.ac = plane;
      have_ac = true;
    } else if (pair == "bd") {
      cal.bd = plane;
      have_bd = true;
    }
  }
  if (!have_ac || !have_bd)
    throw ConfigError("reconstruct: " + path + " has no ac+bd planes for set '" +
                      set_name + "'");
  return cal;
}

/// Displacement-equivalent read noise of one sensing plane: the worse of the
/// two pairs' fit RMS divided by the primary slope.
double derived_sigma_mm(const PlanePairCal& cal) {
  const double sy = std::abs(cal.ac.beta_pf_per_mm);
  const double sx = std::abs(cal.bd.alpha_pf_per_mm);
  if (!(sy > 0.0) || !(sx > 0.0))
    throw NumericError(
        "reconstruct: cannot derive a position sigma from a calibration with "
        "zero primary slope; pass --sigma1/--sigma2");
  return std::max(cal.ac.fit_rms_pf / sy, cal.bd.fit_rms_pf / sx);
}

void run_reconstruct(const ReconstructOpts& opts) {
  const desens::SensorConfig config = resolve_config(opts.common);
  const PlanePairCal cal1 = load_calibration(opts.calib_path, opts.set_name);
  const PlanePairCal cal2 = opts.calib2_path.empty()
                                ? cal1
                                : load_calibration(opts.calib2_path, opts.set_name);
  const auto rows1 = load_samples(opts.input_path);
  const auto rows2 =
      opts.input2_path.empty() ? rows1 : load_samples(opts.input2_path);
  if (rows1.empty()) throw ConfigError("reconstruct: no samples in " + opts.input_path);
  const std::size_t n = std::min(rows1.size(), rows2.size());

  const double sigma1 = opts.sigma1_mm ? *opts.sigma1_mm : derived_sigma_mm(cal1);
  const double sigma2 = opts.sigma2_mm ? *opts.sigma2_mm : derived_sigma_mm(cal2);

  std::ostringstream out;
  for (std::size_t i = 0; i < n; ++i) {
    const desens::PoseEstimate pose = desens::estimate_pose(
        cal1.ac, cal1.bd, cal2.ac, cal2.bd, rows1[i].sample, rows2[i].sample,
        config.robot, sigma1, sigma2);
    json line;
    line["t_s"] = pose.t_s;
    line["s1"]["x_mm"] = pose.sensor1.x_mm;
    line["s1"]["y_mm"] = pose.sensor1.y_mm;
    line["s2"]["x_mm"] = pose.sensor2.x_mm;
    line["s2"]["y_mm"] = pose.sensor2.y_mm;
    line["tip"]["x_mm"] = pose.tip.x_mm;
    line["tip"]["y_mm"] = pose.tip.y_mm;
    line["tip_sigma_mm"] = pose.tip_sigma_mm;
    line["tilt_yz_rad"] = pose.tilt_yz_rad;
    line["tilt_xz_rad"] = pose.tilt_xz_rad;
    out << line.dump() << '\n';
  }
  emit(opts.output_path, out.str());
}

// ---------------------------------------------------------------------------
// gain

struct GainOpts {
  CommonOpts common;
  std::string input_path;
  std::string output_path;
};

void run_gain(const GainOpts& opts) {
  std::vector<desens::SineSeries> series;
  if (!opts.input_path.empty()) {
    std::istringstream in(desens::read_text_file(opts.input_path));
    series = desens::read_sine_csv(in);
  } else {
    const desens::SensorConfig config = resolve_config(opts.common);
    for (std::size_t i = 0; i < config.sine.frequencies_hz.size(); ++i) {
      const double freq = config.sine.frequencies_hz[i];
      const desens::SineSpec spec = sine_spec_for(config, i);
      try {
        series.push_back(desens::to_series(
            desens::run_sine_protocol(config.layout, spec, config.noise)));
      } catch (const std::domain_error& e) {
        throw ConfigError("gain: sine at " + std::to_string(freq) +
                          " Hz is infeasible for this sensor: " + e.what());
      }
    }
  }
  const std::vector<desens::GainEntry> table = desens::compute_gain_table(series);
  std::ostringstream out;
  desens::write_gain_csv(out, table);
  emit(opts.output_path, out.str());
}

// ---------------------------------------------------------------------------
// propagate

struct PropagateOpts {
  CommonOpts common;
  double sigma1_mm = 0.0;
  double sigma2_mm = 0.0;
  std::optional<double> max_dev_mm;
};

void run_propagate(const PropagateOpts& opts) {
  const desens::SensorConfig config = resolve_config(opts.common);
  json doc;
  doc["plane_separation_mm"] = config.robot.plane_separation_mm;
  doc["tip_extension_mm"] = config.robot.tip_extension_mm;
  doc["sigma1_mm"] = opts.sigma1_mm;
  doc["sigma2_mm"] = opts.sigma2_mm;
  doc["tip_sigma_mm"] =
      desens::propagate_error_mm(opts.sigma1_mm, opts.sigma2_mm, config.robot);
  if (opts.max_dev_mm) {
    doc["max_dev_mm"] = *opts.max_dev_mm;
    doc["worst_case_mm"] =
        desens::worst_case_error_mm(*opts.max_dev_mm, config.robot);
  }
  std::cout << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// design-sweep

struct SweepOpts {
  std::string spec_path;
  std::string output_path;
};

std::vector<double> num_array(const json& obj, const char* key) {
  if (!obj.contains(key)) return {};
  const json& arr = obj.at(key);
  if (!arr.is_array())
    throw ConfigError(std::string("sweep spec: '") + key +
                      "' must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw ConfigError(std::string("sweep spec: '") + key + "[" +
                        std::to_string(i) + "]' must be a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

void run_design_sweep(const SweepOpts& opts) {
  json doc;
  try {
    doc = json::parse(desens::read_text_file(opts.spec_path));
  } catch (const json::parse_error& e) {
    throw ConfigError("sweep spec: invalid JSON in " + opts.spec_path + ": " +
                      e.what());
  }
  if (!doc.is_object()) throw ConfigError("sweep spec: root must be an object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key != "inner_radius_mm" && key != "outer_radius_mm" &&
        key != "section_angle_rad" && key != "pre_stretch" &&
        key != "layers" && key != "film" && key != "y_stroke_mm" &&
        key != "mismatch")
      throw ConfigError("sweep spec: unknown key '" + key + "'");
  }

  desens::SweepRanges ranges;
  ranges.base_film = desens::default_film();
  ranges.inner_radius_mm = num_array(doc, "inner_radius_mm");
  ranges.outer_radius_mm = num_array(doc, "outer_radius_mm");
  ranges.section_angle_rad = num_array(doc, "section_angle_rad");
  ranges.pre_stretch = num_array(doc, "pre_stretch");
  if (doc.contains("layers")) {
    const json& arr = doc.at("layers");
    if (!arr.is_array())
      throw ConfigError("sweep spec: 'layers' must be an array of integers");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number_integer())
        throw ConfigError("sweep spec: 'layers[" + std::to_string(i) +
                          "]' must be an integer");
      ranges.layer_counts.push_back(arr[i].get<int>());
    }
  }
  if (doc.contains("film")) {
    const json& film = doc.at("film");
    if (!film.is_object()) throw ConfigError("sweep spec: 'film' must be an object");
    for (auto it = film.begin(); it != film.end(); ++it) {
      const std::string& key = it.key();
      if (key == "relative_permittivity")
        ranges.base_film.relative_permittivity = it.value().get<double>();
      else if (key == "initial_thickness_mm")
        ranges.base_film.initial_thickness_mm = it.value().get<double>();
      else if (key == "pre_stretch")
        ranges.base_film.pre_stretch = it.value().get<double>();
      else if (key == "max_stretch")
        ranges.base_film.max_stretch = it.value().get<double>();
      else if (key == "layer_count")
        ranges.base_film.layer_count = it.value().get<int>();
      else
        throw ConfigError("sweep spec: unknown key 'film." + key + "'");
    }
  }
  if (doc.contains("y_stroke_mm")) {
    if (!doc.at("y_stroke_mm").is_number())
      throw ConfigError("sweep spec: 'y_stroke_mm' must be a number");
    ranges.y_stroke_mm = doc.at("y_stroke_mm").get<double>();
  }
  if (doc.contains("mismatch")) {
    if (!doc.at("mismatch").is_number())
      throw ConfigError("sweep spec: 'mismatch' must be a number");
    ranges.mismatch = doc.at("mismatch").get<double>();
  }
  try {
    ranges.base_film.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("sweep spec: film: ") + e.what());
  }

  const desens::SweepResult result = desens::sweep(ranges);
  std::ostringstream out;
  desens::write_sweep_csv(out, result);
  emit(opts.output_path, out.str());
  std::cerr << "design-sweep: " << result.rows.size() << " candidates scored, "
            << result.skipped_invalid << " invalid combinations skipped\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "desens - planar two-DOF differential elastomer capacitive position "
      "sensor toolkit"};
  app.require_subcommand(1);

  SimulateOpts sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run a virtual measurement campaign and write a CSV");
  add_config_options(simulate, sim.common);
  simulate->add_option("--protocol", sim.protocol,
                       "'grid' (default) or 'sine'");
  simulate->add_option("--sets", sim.sets,
                       "Grid sets to run (1 aligned, 2 tilted, 3 shimmed)");
  simulate->add_option("-o,--output", sim.output_path,
                       "Output CSV path (stdout when omitted)");
  simulate->add_option("--emit-plot-data", sim.plot_prefix,
                       "Also write <prefix>_cells.csv and <prefix>_diff.csv");
  simulate->callback([&sim] { run_simulate(sim); });

  CalibrateOpts cal;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Fit calibration planes (or per-cell parabolas) from a "
                   "samples CSV");
  calibrate->add_option("-i,--input", cal.input_path, "Samples CSV")
      ->required();
  calibrate->add_option("-o,--output", cal.output_path,
                        "Output JSON path (stdout when omitted)");
  calibrate->add_option("--mode", cal.mode, "'plane' (default) or 'cells'");
  calibrate->callback([&cal] { run_calibrate(cal); });

  EvaluateOpts eval;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate",
      "Cross-evaluate per-set calibrations against every other set");
  evaluate->add_option("-i,--input", eval.input_path, "Samples CSV")
      ->required();
  evaluate->add_option("-o,--output", eval.output_path,
                       "Deviation CSV path (stdout when omitted)");
  evaluate->callback([&eval] { run_evaluate(eval); });

  ReconstructOpts rec;
  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct",
      "Reconstruct guide poses from samples and calibration planes");
  add_config_options(reconstruct, rec.common);
  reconstruct->add_option("--calib", rec.calib_path,
                          "Calibration JSON for sensor 1 (tip side)")
      ->required();
  reconstruct->add_option("--calib2", rec.calib2_path,
                          "Calibration JSON for sensor 2 (defaults to --calib)");
  reconstruct->add_option("-i,--input", rec.input_path,
                          "Samples CSV for sensor 1")
      ->required();
  reconstruct->add_option("--input2", rec.input2_path,
                          "Samples CSV for sensor 2 (defaults to --input)");
  reconstruct->add_option("-o,--output", rec.output_path,
                          "Pose JSONL path (stdout when omitted)");
  reconstruct->add_option("--set", rec.set_name,
                          "Calibration set name to use (default 'all')");
  reconstruct->add_option("--sigma1", rec.sigma1_mm,
                          "Per-DOF sigma of sensor 1, mm (derived from the "
                          "calibration fit when omitted)");
  reconstruct->add_option("--sigma2", rec.sigma2_mm,
                          "Per-DOF sigma of sensor 2, mm");
  reconstruct->callback([&rec] { run_reconstruct(rec); });

  GainOpts gain;
  CLI::App* gain_cmd = app.add_subcommand(
      "gain", "Frequency response from sine series (simulated or from CSV)");
  add_config_options(gain_cmd, gain.common);
  gain_cmd->add_option("-i,--input", gain.input_path,
                       "Sine CSV (simulates the configured campaign when "
                       "omitted)");
  gain_cmd->add_option("-o,--output", gain.output_path,
                       "Gain CSV path (stdout when omitted)");
  gain_cmd->callback([&gain] { run_gain(gain); });

  PropagateOpts prop;
  CLI::App* propagate = app.add_subcommand(
      "propagate", "Propagate per-plane sigmas to the guide tip");
  add_config_options(propagate, prop.common);
  propagate->add_option("--sigma1", prop.sigma1_mm,
                        "Per-DOF sigma of sensor 1 (tip side), mm")
      ->required();
  propagate->add_option("--sigma2", prop.sigma2_mm,
                        "Per-DOF sigma of sensor 2, mm")
      ->required();
  propagate->add_option("--max-dev", prop.max_dev_mm,
                        "Also report the worst-case tip error for this "
                        "per-plane bound, mm");
  propagate->callback([&prop] { run_propagate(prop); });

  SweepOpts sweep;
  CLI::App* design_sweep = app.add_subcommand(
      "design-sweep", "Score a Cartesian sweep of candidate cell designs");
  design_sweep->add_option("--spec", sweep.spec_path, "Sweep-range JSON")
      ->required();
  design_sweep->add_option("-o,--output", sweep.output_path,
                           "Sweep CSV path (stdout when omitted)");
  design_sweep->callback([&sweep] { run_design_sweep(sweep); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
