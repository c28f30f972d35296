#pragma once

#include <span>
#include <vector>

#include "desens/simulator.hpp"

namespace desens {

/// Least-squares fit of v(t) ~ mean + amplitude * sin(2 pi f t + phase) at a
/// known frequency, via the linear basis [1, sin, cos].
struct SineFit {
  double mean = 0.0;
  double amplitude = 0.0;
  double phase_rad = 0.0;
  /// Population RMS of the residuals (harmonics, noise, drift).
  double residual_rms = 0.0;
};

/// Throws NumericError if fewer than 4 samples or the basis is degenerate
/// (e.g. all timestamps equal).
SineFit fit_sine(std::span<const double> t_s, std::span<const double> values,
                 double frequency_hz);

/// One displacement/capacitance series at a single drive frequency.
struct SineSeries {
  double frequency_hz = 0.0;
  std::vector<double> t_s;
  std::vector<double> disp_mm;
  std::vector<double> c_pf;
};

SineSeries to_series(const SineRun& run);

struct GainEntry {
  double frequency_hz = 0.0;
  /// G = capacitance amplitude / displacement amplitude, pF/mm.
  double gain_pf_per_mm = 0.0;
  /// 20 log10(G / G_ref) with the lowest-frequency run as the 0 dB
  /// reference.
  double gain_db = 0.0;
};

/// Fits both channels of every series at its stated frequency and returns
/// the gain table sorted by ascending frequency. Throws NumericError on an
/// empty input, a (near-)zero displacement or reference amplitude, or a
/// series whose displacement channel is not sinusoidal at the stated
/// frequency (relative fit residual above 25%).
std::vector<GainEntry> compute_gain_table(std::span<const SineSeries> series);

}  // namespace desens
