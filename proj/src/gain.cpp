#include "desens/gain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "desens/errors.hpp"
#include "desens/linsolve.hpp"

namespace desens {

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

SineFit fit_sine(std::span<const double> t_s, std::span<const double> values,
                 double frequency_hz) {
  const std::size_t n = t_s.size();
  if (n != values.size())
    throw NumericError("fit_sine: time and value series differ in length (" +
                       std::to_string(n) + " vs " +
                       std::to_string(values.size()) + ")");
  if (n < 4)
    throw NumericError("fit_sine: need at least 4 samples, got " +
                       std::to_string(n));
  if (!(frequency_hz > 0.0))
    throw NumericError("fit_sine: frequency must be > 0 Hz, got " +
                       std::to_string(frequency_hz));

  // Normal equations for v ~ a0 + a1 sin(w t) + a2 cos(w t).
  const double w = kTwoPi * frequency_hz;
  double s_s = 0.0, s_c = 0.0, s_ss = 0.0, s_cc = 0.0, s_sc = 0.0;
  double s_v = 0.0, s_vs = 0.0, s_vc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double si = std::sin(w * t_s[i]);
    const double ci = std::cos(w * t_s[i]);
    s_s += si;
    s_c += ci;
    s_ss += si * si;
    s_cc += ci * ci;
    s_sc += si * ci;
    s_v += values[i];
    s_vs += values[i] * si;
    s_vc += values[i] * ci;
  }
  std::array<double, 3> coef;
  try {
    coef = detail::solve3({{{static_cast<double>(n), s_s, s_c},
                            {s_s, s_ss, s_sc},
                            {s_c, s_sc, s_cc}}},
                          {s_v, s_vs, s_vc});
  } catch (const NumericError&) {
    throw NumericError(
        "fit_sine: degenerate sampling (timestamps do not expose the "
        "frequency " +
        std::to_string(frequency_hz) + " Hz)");
  }

  SineFit fit;
  fit.mean = coef[0];
  fit.amplitude = std::hypot(coef[1], coef[2]);
  fit.phase_rad = std::atan2(coef[2], coef[1]);
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = values[i] - (coef[0] + coef[1] * std::sin(w * t_s[i]) +
                                  coef[2] * std::cos(w * t_s[i]));
    ssr += r * r;
  }
  fit.residual_rms = std::sqrt(ssr / static_cast<double>(n));
  return fit;
}

SineSeries to_series(const SineRun& run) {
  SineSeries series;
  series.frequency_hz = run.spec.frequency_hz;
  series.t_s.reserve(run.points.size());
  series.disp_mm.reserve(run.points.size());
  series.c_pf.reserve(run.points.size());
  for (const SinePoint& p : run.points) {
    series.t_s.push_back(p.t_s);
    series.disp_mm.push_back(p.disp_mm);
    series.c_pf.push_back(p.c_pf);
  }
  return series;
}

std::vector<GainEntry> compute_gain_table(std::span<const SineSeries> series) {
  if (series.empty())
    throw NumericError("compute_gain_table: no frequency series given");

  std::vector<GainEntry> table;
  table.reserve(series.size());
  for (const SineSeries& s : series) {
    const SineFit disp = fit_sine(s.t_s, s.disp_mm, s.frequency_hz);
    if (!(disp.amplitude > 0.0) ||
        disp.residual_rms > 0.25 * disp.amplitude)
      throw NumericError(
          "compute_gain_table: displacement channel at " +
          std::to_string(s.frequency_hz) +
          " Hz is not sinusoidal at the stated frequency (amplitude " +
          std::to_string(disp.amplitude) + " mm, residual RMS " +
          std::to_string(disp.residual_rms) + " mm)");
    const SineFit cap = fit_sine(s.t_s, s.c_pf, s.frequency_hz);
    GainEntry entry;
    entry.frequency_hz = s.frequency_hz;
    entry.gain_pf_per_mm = cap.amplitude / disp.amplitude;
    table.push_back(entry);
  }

  std::sort(table.begin(), table.end(),
            [](const GainEntry& a, const GainEntry& b) {
              return a.frequency_hz < b.frequency_hz;
            });
  const double ref = table.front().gain_pf_per_mm;
  if (!(ref > 0.0))
    throw NumericError(
        "compute_gain_table: reference gain at the lowest frequency is zero; "
        "cannot normalize to dB");
  for (GainEntry& entry : table)
    entry.gain_db = 20.0 * std::log10(entry.gain_pf_per_mm / ref);
  return table;
}

}  // namespace desens
