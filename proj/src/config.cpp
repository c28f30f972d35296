#include "desens/config.hpp"

#include <initializer_list>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "desens/csv.hpp"
#include "desens/errors.hpp"

namespace desens {

namespace {

using nlohmann::json;

json parse_root(const std::string& text) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError("config: root must be an object");
    return doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError("config: unknown key '" + path + it.key() + "'");
  }
}

const json* child(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) return nullptr;
  const json& v = obj.at(key);
  if (!v.is_object())
    throw ConfigError("config: '" + path + key + "' must be an object");
  return &v;
}

double get_num(const json& obj, const char* key, double fallback,
               const std::string& path) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError("config: '" + path + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const char* key, int fallback,
            const std::string& path) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError("config: '" + path + key + "' must be an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback,
              const std::string& path) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean())
    throw ConfigError("config: '" + path + key + "' must be a boolean");
  return v.get<bool>();
}

std::uint64_t get_u64(const json& obj, const char* key, std::uint64_t fallback,
                      const std::string& path) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<long long>() < 0))
    throw ConfigError("config: '" + path + key +
                      "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

MaterialFilm parse_film(const json& obj, const MaterialFilm& fallback,
                        const std::string& path) {
  check_keys(obj,
             {"relative_permittivity", "initial_thickness_mm", "pre_stretch",
              "max_stretch", "layer_count"},
             path);
  MaterialFilm film = fallback;
  film.relative_permittivity =
      get_num(obj, "relative_permittivity", fallback.relative_permittivity, path);
  film.initial_thickness_mm =
      get_num(obj, "initial_thickness_mm", fallback.initial_thickness_mm, path);
  film.pre_stretch = get_num(obj, "pre_stretch", fallback.pre_stretch, path);
  film.max_stretch = get_num(obj, "max_stretch", fallback.max_stretch, path);
  film.layer_count = get_int(obj, "layer_count", fallback.layer_count, path);
  return film;
}

CellGeometry parse_cell(const json& obj, const CellGeometry& fallback,
                        const MaterialFilm& film, const std::string& path) {
  check_keys(obj, {"lower_base_mm", "upper_base_mm", "initial_height_mm"},
             path);
  CellGeometry cell = fallback;
  cell.lower_base_mm = get_num(obj, "lower_base_mm", fallback.lower_base_mm, path);
  cell.upper_base_mm = get_num(obj, "upper_base_mm", fallback.upper_base_mm, path);
  cell.initial_height_mm =
      get_num(obj, "initial_height_mm", fallback.initial_height_mm, path);
  cell.film = film;
  return cell;
}

CellPair parse_pair(const json& obj, const CellPair& fallback,
                    const MaterialFilm& film, const std::string& path) {
  check_keys(obj, {"cell_1", "cell_2"}, path);
  CellPair pair = fallback;
  pair.cell_1.film = film;
  pair.cell_2.film = film;
  if (const json* c = child(obj, "cell_1", path))
    pair.cell_1 = parse_cell(*c, pair.cell_1, film, path + "cell_1.");
  if (const json* c = child(obj, "cell_2", path))
    pair.cell_2 = parse_cell(*c, pair.cell_2, film, path + "cell_2.");
  return pair;
}

SensorLayout parse_layout(const json& obj, const std::string& path) {
  check_keys(obj,
             {"film", "pair_y", "pair_x", "y_growing_is_a", "x_growing_is_b",
              "inner_radius_mm", "outer_radius_mm", "grid_misalignment_rad",
              "cell_bias_pf"},
             path);
  SensorLayout layout;
  // One membrane: all four cells share the layout-level film.
  MaterialFilm film;
  if (const json* f = child(obj, "film", path))
    film = parse_film(*f, film, path + "film.");
  if (const json* p = child(obj, "pair_y", path))
    layout.pair_y = parse_pair(*p, layout.pair_y, film, path + "pair_y.");
  else {
    layout.pair_y.cell_1.film = film;
    layout.pair_y.cell_2.film = film;
  }
  if (const json* p = child(obj, "pair_x", path))
    layout.pair_x = parse_pair(*p, layout.pair_x, film, path + "pair_x.");
  else {
    layout.pair_x.cell_1.film = film;
    layout.pair_x.cell_2.film = film;
  }
  layout.y_growing_is_a = get_bool(obj, "y_growing_is_a", true, path);
  layout.x_growing_is_b = get_bool(obj, "x_growing_is_b", true, path);
  layout.inner_radius_mm =
      get_num(obj, "inner_radius_mm", layout.inner_radius_mm, path);
  layout.outer_radius_mm =
      get_num(obj, "outer_radius_mm", layout.outer_radius_mm, path);
  layout.grid_misalignment_rad =
      get_num(obj, "grid_misalignment_rad", 0.0, path);
  if (obj.contains("cell_bias_pf")) {
    const json& bias = obj.at("cell_bias_pf");
    if (!bias.is_array() || bias.size() != 4)
      throw ConfigError("config: '" + path +
                        "cell_bias_pf' must be an array of 4 numbers (A-D)");
    for (std::size_t i = 0; i < 4; ++i) {
      if (!bias[i].is_number())
        throw ConfigError("config: '" + path + "cell_bias_pf[" +
                          std::to_string(i) + "]' must be a number");
      layout.cell_bias_pf[i] = bias[i].get<double>();
    }
  }
  return layout;
}

json dump_film(const MaterialFilm& film) {
  json obj;
  obj["relative_permittivity"] = film.relative_permittivity;
  obj["initial_thickness_mm"] = film.initial_thickness_mm;
  obj["pre_stretch"] = film.pre_stretch;
  obj["max_stretch"] = film.max_stretch;
  obj["layer_count"] = film.layer_count;
  return obj;
}

json dump_cell(const CellGeometry& cell) {
  json obj;
  obj["lower_base_mm"] = cell.lower_base_mm;
  obj["upper_base_mm"] = cell.upper_base_mm;
  obj["initial_height_mm"] = cell.initial_height_mm;
  return obj;
}

}  // namespace

SensorConfig parse_sensor_config(const std::string& json_text) {
  const json doc = parse_root(json_text);
  check_keys(doc, {"layout", "noise", "grid", "sine", "robot"}, "");

  SensorConfig config;
  if (const json* layout = child(doc, "layout", ""))
    config.layout = parse_layout(*layout, "layout.");
  if (const json* noise = child(doc, "noise", "")) {
    check_keys(*noise, {"std_pf", "seed"}, "noise.");
    config.noise.std_pf = get_num(*noise, "std_pf", config.noise.std_pf, "noise.");
    config.noise.seed = get_u64(*noise, "seed", config.noise.seed, "noise.");
  }
  if (const json* grid = child(doc, "grid", "")) {
    check_keys(*grid,
               {"points_per_axis", "extent_mm", "tilt_rad", "shim_z_mm",
                "relax_s"},
               "grid.");
    config.grid.points_per_axis =
        get_int(*grid, "points_per_axis", config.grid.points_per_axis, "grid.");
    config.grid.extent_mm =
        get_num(*grid, "extent_mm", config.grid.extent_mm, "grid.");
    config.grid.tilt_rad =
        get_num(*grid, "tilt_rad", config.grid.tilt_rad, "grid.");
    config.grid.shim_z_mm =
        get_num(*grid, "shim_z_mm", config.grid.shim_z_mm, "grid.");
    config.grid.relax_s =
        get_num(*grid, "relax_s", config.grid.relax_s, "grid.");
  }
  if (const json* sine = child(doc, "sine", "")) {
    check_keys(*sine,
               {"axis", "amplitude_mm", "frequencies_hz", "cycles",
                "samples_per_cycle"},
               "sine.");
    if (sine->contains("axis")) {
      const json& axis = sine->at("axis");
      if (!axis.is_string() ||
          (axis.get<std::string>() != "x" && axis.get<std::string>() != "y"))
        throw ConfigError("config: 'sine.axis' must be \"x\" or \"y\"");
      config.sine.axis = axis.get<std::string>()[0];
    }
    config.sine.amplitude_mm =
        get_num(*sine, "amplitude_mm", config.sine.amplitude_mm, "sine.");
    if (sine->contains("frequencies_hz")) {
      const json& freqs = sine->at("frequencies_hz");
      if (!freqs.is_array() || freqs.empty())
        throw ConfigError(
            "config: 'sine.frequencies_hz' must be a non-empty array of "
            "numbers");
      config.sine.frequencies_hz.clear();
      for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (!freqs[i].is_number())
          throw ConfigError("config: 'sine.frequencies_hz[" +
                            std::to_string(i) + "]' must be a number");
        config.sine.frequencies_hz.push_back(freqs[i].get<double>());
      }
    }
    config.sine.cycles = get_int(*sine, "cycles", config.sine.cycles, "sine.");
    config.sine.samples_per_cycle = get_int(
        *sine, "samples_per_cycle", config.sine.samples_per_cycle, "sine.");
  }
  if (const json* robot = child(doc, "robot", "")) {
    check_keys(*robot, {"plane_separation_mm", "tip_extension_mm"}, "robot.");
    config.robot.plane_separation_mm = get_num(
        *robot, "plane_separation_mm", config.robot.plane_separation_mm, "robot.");
    config.robot.tip_extension_mm = get_num(
        *robot, "tip_extension_mm", config.robot.tip_extension_mm, "robot.");
  }

  // Semantic validation with the offending section in the message.
  try {
    config.layout.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: layout: ") + e.what());
  }
  try {
    config.noise.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: noise: ") + e.what());
  }
  try {
    GridSpec probe;
    probe.points_per_axis = config.grid.points_per_axis;
    probe.extent_mm = config.grid.extent_mm;
    probe.tilt_rad = config.grid.tilt_rad;
    probe.shim_z_mm = config.grid.shim_z_mm;
    probe.relax_s = config.grid.relax_s;
    probe.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: grid: ") + e.what());
  }
  try {
    for (double f : config.sine.frequencies_hz) {
      SineSpec probe;
      probe.axis = config.sine.axis;
      probe.amplitude_mm = config.sine.amplitude_mm;
      probe.frequency_hz = f;
      probe.cycles = config.sine.cycles;
      probe.samples_per_cycle = config.sine.samples_per_cycle;
      probe.validate();
    }
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: sine: ") + e.what());
  }
  try {
    config.robot.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: robot: ") + e.what());
  }
  return config;
}

SensorConfig load_sensor_config(const std::string& path) {
  try {
    return parse_sensor_config(read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(e.what()) + " (file: " + path + ")");
  }
}

std::string dump_sensor_config(const SensorConfig& config) {
  json doc;
  json& layout = doc["layout"];
  layout["film"] = dump_film(config.layout.pair_y.cell_1.film);
  layout["pair_y"]["cell_1"] = dump_cell(config.layout.pair_y.cell_1);
  layout["pair_y"]["cell_2"] = dump_cell(config.layout.pair_y.cell_2);
  layout["pair_x"]["cell_1"] = dump_cell(config.layout.pair_x.cell_1);
  layout["pair_x"]["cell_2"] = dump_cell(config.layout.pair_x.cell_2);
  layout["y_growing_is_a"] = config.layout.y_growing_is_a;
  layout["x_growing_is_b"] = config.layout.x_growing_is_b;
  layout["inner_radius_mm"] = config.layout.inner_radius_mm;
  layout["outer_radius_mm"] = config.layout.outer_radius_mm;
  layout["grid_misalignment_rad"] = config.layout.grid_misalignment_rad;
  layout["cell_bias_pf"] = config.layout.cell_bias_pf;
  doc["noise"]["std_pf"] = config.noise.std_pf;
  doc["noise"]["seed"] = config.noise.seed;
  doc["grid"]["points_per_axis"] = config.grid.points_per_axis;
  doc["grid"]["extent_mm"] = config.grid.extent_mm;
  doc["grid"]["tilt_rad"] = config.grid.tilt_rad;
  doc["grid"]["shim_z_mm"] = config.grid.shim_z_mm;
  doc["grid"]["relax_s"] = config.grid.relax_s;
  doc["sine"]["axis"] = std::string(1, config.sine.axis);
  doc["sine"]["amplitude_mm"] = config.sine.amplitude_mm;
  doc["sine"]["frequencies_hz"] = config.sine.frequencies_hz;
  doc["sine"]["cycles"] = config.sine.cycles;
  doc["sine"]["samples_per_cycle"] = config.sine.samples_per_cycle;
  doc["robot"]["plane_separation_mm"] = config.robot.plane_separation_mm;
  doc["robot"]["tip_extension_mm"] = config.robot.tip_extension_mm;
  return doc.dump(2) + "\n";
}

}  // namespace desens
