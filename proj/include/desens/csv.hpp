#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "desens/calibration.hpp"
#include "desens/design.hpp"
#include "desens/gain.hpp"
#include "desens/simulator.hpp"

namespace desens {

/// All CSV emitters format floating-point fields with 6 significant digits
/// ("%.6g", C locale); integers are written as-is. Readers verify the exact
/// header before parsing and throw ConfigError on any malformed row
/// (IoError is reserved for stream/file failures).

inline constexpr const char* kSamplesCsvHeader =
    "set,index,t_s,x_mm,y_mm,z_mm,rotx_rad,roty_rad,rotz_rad,"
    "cA_pF,cB_pF,cC_pF,cD_pF";
inline constexpr const char* kSineCsvHeader = "freq_hz,t_s,disp_mm,c_pF";
inline constexpr const char* kDeviationCsvHeader =
    "pair,calibration_set,evaluation_set,self,n_points,max_mm,rms_mm";
inline constexpr const char* kSweepCsvHeader =
    "ri_mm,ro_mm,theta_deg,prestretch,layers,sens_pF_per_mm,linerr,"
    "zgain_per_mm,stretch_ok,C0_pF";
inline constexpr const char* kGainCsvHeader = "freq_hz,gain_pF_per_mm,gain_db";

/// snprintf("%.6g") of one value.
std::string format_g6(double v);

/// One parsed row of a samples CSV.
struct SampleRow {
  int set = 0;
  int index = 0;
  CapacitanceSample sample;
};

void write_samples_csv(std::ostream& out, const GridRun& run);
void write_samples_csv(std::ostream& out, std::span<const SampleRow> rows);
std::vector<SampleRow> read_samples_csv(std::istream& in);

void write_sine_csv(std::ostream& out, const SineRun& run);
void write_sine_csv(std::ostream& out, std::span<const SineRun> runs);
/// Groups rows by their freq_hz column (consecutive or not), preserving
/// first-appearance order of each frequency.
std::vector<SineSeries> read_sine_csv(std::istream& in);

void write_deviation_csv(std::ostream& out,
                         std::span<const std::pair<std::string, DeviationReport>>
                             pair_reports);

void write_sweep_csv(std::ostream& out, const SweepResult& result);

void write_gain_csv(std::ostream& out, std::span<const GainEntry> entries);

/// File-level helpers. Open/create failures throw IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace desens
