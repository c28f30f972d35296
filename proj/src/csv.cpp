#include "desens/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <utility>

#include "desens/errors.hpp"

namespace desens {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& field, int line_no, const char* column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("csv: line " + std::to_string(line_no) + ", column '" +
                      column + "': cannot parse '" + field + "' as a number");
  return value;
}

int parse_int(const std::string& field, int line_no, const char* column) {
  int value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("csv: line " + std::to_string(line_no) + ", column '" +
                      column + "': cannot parse '" + field + "' as an integer");
  return value;
}

std::string chomp(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
    line.pop_back();
  return line;
}

void require_header(std::istream& in, const char* expected) {
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("csv: empty input, expected header '" +
                      std::string(expected) + "'");
  if (chomp(line) != expected)
    throw ConfigError("csv: unexpected header '" + chomp(line) +
                      "', expected '" + expected + "'");
}

void require_columns(const std::vector<std::string>& fields, std::size_t n,
                     int line_no) {
  if (fields.size() != n)
    throw ConfigError("csv: line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(n));
}

void write_sample_row(std::ostream& out, int set, int index,
                      const CapacitanceSample& s) {
  out << set << ',' << index << ',' << format_g6(s.t_s) << ','
      << format_g6(s.true_pose.x_mm) << ',' << format_g6(s.true_pose.y_mm)
      << ',' << format_g6(s.true_pose.z_mm) << ','
      << format_g6(s.true_pose.rot_x_rad) << ','
      << format_g6(s.true_pose.rot_y_rad) << ','
      << format_g6(s.true_pose.rot_z_rad) << ',' << format_g6(s.c_a_pf) << ','
      << format_g6(s.c_b_pf) << ',' << format_g6(s.c_c_pf) << ','
      << format_g6(s.c_d_pf) << '\n';
}

}  // namespace

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_samples_csv(std::ostream& out, const GridRun& run) {
  out << kSamplesCsvHeader << '\n';
  for (std::size_t i = 0; i < run.samples.size(); ++i)
    write_sample_row(out, run.spec.set_id, static_cast<int>(i),
                     run.samples[i]);
}

void write_samples_csv(std::ostream& out, std::span<const SampleRow> rows) {
  out << kSamplesCsvHeader << '\n';
  for (const SampleRow& row : rows)
    write_sample_row(out, row.set, row.index, row.sample);
}

std::vector<SampleRow> read_samples_csv(std::istream& in) {
  require_header(in, kSamplesCsvHeader);
  std::vector<SampleRow> rows;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(line);
    if (line.empty()) continue;
    const auto f = split_fields(line);
    require_columns(f, 13, line_no);
    SampleRow row;
    row.set = parse_int(f[0], line_no, "set");
    row.index = parse_int(f[1], line_no, "index");
    row.sample.t_s = parse_double(f[2], line_no, "t_s");
    row.sample.true_pose.x_mm = parse_double(f[3], line_no, "x_mm");
    row.sample.true_pose.y_mm = parse_double(f[4], line_no, "y_mm");
    row.sample.true_pose.z_mm = parse_double(f[5], line_no, "z_mm");
    row.sample.true_pose.rot_x_rad = parse_double(f[6], line_no, "rotx_rad");
    row.sample.true_pose.rot_y_rad = parse_double(f[7], line_no, "roty_rad");
    row.sample.true_pose.rot_z_rad = parse_double(f[8], line_no, "rotz_rad");
    row.sample.c_a_pf = parse_double(f[9], line_no, "cA_pF");
    row.sample.c_b_pf = parse_double(f[10], line_no, "cB_pF");
    row.sample.c_c_pf = parse_double(f[11], line_no, "cC_pF");
    row.sample.c_d_pf = parse_double(f[12], line_no, "cD_pF");
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sine_csv(std::ostream& out, const SineRun& run) {
  write_sine_csv(out, std::span<const SineRun>(&run, 1));
}

void write_sine_csv(std::ostream& out, std::span<const SineRun> runs) {
  out << kSineCsvHeader << '\n';
  for (const SineRun& run : runs)
    for (const SinePoint& p : run.points)
      out << format_g6(run.spec.frequency_hz) << ',' << format_g6(p.t_s) << ','
          << format_g6(p.disp_mm) << ',' << format_g6(p.c_pf) << '\n';
}

std::vector<SineSeries> read_sine_csv(std::istream& in) {
  require_header(in, kSineCsvHeader);
  std::vector<SineSeries> series;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(line);
    if (line.empty()) continue;
    const auto f = split_fields(line);
    require_columns(f, 4, line_no);
    const double freq = parse_double(f[0], line_no, "freq_hz");
    SineSeries* dest = nullptr;
    for (SineSeries& s : series)
      if (s.frequency_hz == freq) {
        dest = &s;
        break;
      }
    if (dest == nullptr) {
      series.emplace_back();
      dest = &series.back();
      dest->frequency_hz = freq;
    }
    dest->t_s.push_back(parse_double(f[1], line_no, "t_s"));
    dest->disp_mm.push_back(parse_double(f[2], line_no, "disp_mm"));
    dest->c_pf.push_back(parse_double(f[3], line_no, "c_pF"));
  }
  return series;
}

void write_deviation_csv(
    std::ostream& out,
    std::span<const std::pair<std::string, DeviationReport>> pair_reports) {
  out << kDeviationCsvHeader << '\n';
  for (const auto& [pair, report] : pair_reports)
    out << pair << ',' << report.calibration_set << ','
        << report.evaluation_set << ','
        << (report.calibration_set == report.evaluation_set ? 1 : 0) << ','
        << report.n_points << ',' << format_g6(report.max_mm) << ','
        << format_g6(report.rms_mm) << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  constexpr double kRadToDeg = 57.29577951308232;
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : result.rows)
    out << format_g6(row.point.inner_radius_mm) << ','
        << format_g6(row.point.outer_radius_mm) << ','
        << format_g6(row.point.section_angle_rad * kRadToDeg) << ','
        << format_g6(row.point.film.pre_stretch) << ','
        << row.point.film.layer_count << ','
        << format_g6(row.score.sensitivity_pf_per_mm) << ','
        << format_g6(row.score.linearity_error) << ','
        << format_g6(row.score.parasitic_z_gain_per_mm) << ','
        << (row.score.stretch_ok ? 1 : 0) << ','
        << format_g6(row.score.base_capacitance_pf) << '\n';
}

void write_gain_csv(std::ostream& out, std::span<const GainEntry> entries) {
  out << kGainCsvHeader << '\n';
  for (const GainEntry& e : entries)
    out << format_g6(e.frequency_hz) << ',' << format_g6(e.gain_pf_per_mm)
        << ',' << format_g6(e.gain_db) << '\n';
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on file: " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failure on file: " + path);
}

}  // namespace desens
