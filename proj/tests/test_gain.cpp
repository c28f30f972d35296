#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "desens/errors.hpp"
#include "desens/gain.hpp"
#include "desens/pair.hpp"
#include "desens/presets.hpp"

using namespace desens;

namespace {

constexpr double kTwoPi = 6.283185307179586;

SineSeries synth_series(double f_hz, double amp_mm, double gain_pf_per_mm,
                        int n, double mean_pf = 0.0) {
  SineSeries s;
  s.frequency_hz = f_hz;
  const double dt = 1.0 / (f_hz * 32.0);
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    const double d = amp_mm * std::sin(kTwoPi * f_hz * t);
    s.t_s.push_back(t);
    s.disp_mm.push_back(d);
    s.c_pf.push_back(mean_pf + gain_pf_per_mm * d);
  }
  return s;
}

}  // namespace

TEST_CASE("sine fit recovers amplitude, mean, and phase exactly") {
  const double f = 0.25, amp = 3.5, mean = 12.0, phase = 0.8;
  std::vector<double> t, v;
  for (int i = 0; i < 64; ++i) {
    t.push_back(i * 0.125);
    v.push_back(mean + amp * std::sin(kTwoPi * f * t.back() + phase));
  }
  const SineFit fit = fit_sine(t, v, f);
  CHECK(fit.mean == doctest::Approx(mean).epsilon(1e-10));
  CHECK(fit.amplitude == doctest::Approx(amp).epsilon(1e-10));
  CHECK(fit.phase_rad == doctest::Approx(phase).epsilon(1e-10));
  CHECK(fit.residual_rms < 1e-9);

  // Riding on white noise: amplitude still recovered, residual ~ noise std.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.2);
  std::vector<double> noisy = v;
  for (double& x : noisy) x += noise(rng);
  const SineFit nf = fit_sine(t, noisy, f);
  CHECK(nf.amplitude == doctest::Approx(amp).epsilon(0.05));
  CHECK(nf.residual_rms == doctest::Approx(0.2).epsilon(0.3));

  CHECK_THROWS_AS(fit_sine(std::vector<double>{0.0, 1.0, 2.0},
                           std::vector<double>{1.0, 2.0, 3.0}, f),
                  NumericError);
  const std::vector<double> same_t(8, 1.0), vals(8, 0.5);
  CHECK_THROWS_AS(fit_sine(same_t, vals, f), NumericError);
}

TEST_CASE("small-stroke gain equals the differential slope per cell pair") {
  // A single growing cell driven sinusoidally responds (to first order)
  // with amplitude 2 k h0 A: half the identical-pair differential slope
  // times the drive amplitude.
  const SensorLayout layout = nominal_layout();
  SineSpec spec;
  spec.axis = 'y';
  spec.amplitude_mm = 0.5;
  spec.frequency_hz = 0.2;
  spec.cycles = 4;
  spec.samples_per_cycle = 64;
  NoiseModel off;
  off.std_pf = 0.0;

  const SineSeries series = to_series(run_sine_protocol(layout, spec, off));
  CHECK(series.frequency_hz == 0.2);
  REQUIRE(series.t_s.size() == 256);
  const std::vector<SineSeries> table_in{series};
  const std::vector<GainEntry> table = compute_gain_table(table_in);
  REQUIRE(table.size() == 1);
  const double slope_one_cell =
      0.5 * differential_sensitivity_pf_per_mm(layout.pair_y, 0.0);
  // The quadratic response bends the waveform slightly; its fundamental
  // stays at 2 k h0 A exactly, so only numerical tolerance applies.
  CHECK(table[0].gain_pf_per_mm ==
        doctest::Approx(slope_one_cell).epsilon(1e-9));
  CHECK(table[0].gain_db == 0.0);  // single entry is its own reference
}

TEST_CASE("gain table: flat response at 0 dB, attenuated channel in dB") {
  // Three ideal runs at different frequencies with the same gain: the table
  // is flat at 0 dB referenced to the lowest frequency.
  std::vector<SineSeries> flat;
  for (double f : {1.0, 0.01, 0.1})  // deliberately unsorted
    flat.push_back(synth_series(f, 2.0, 33.0, 256, 900.0));
  const std::vector<GainEntry> table = compute_gain_table(flat);
  REQUIRE(table.size() == 3);
  CHECK(table[0].frequency_hz == 0.01);
  CHECK(table[1].frequency_hz == 0.1);
  CHECK(table[2].frequency_hz == 1.0);
  for (const GainEntry& e : table) {
    CHECK(e.gain_pf_per_mm == doctest::Approx(33.0).epsilon(1e-9));
    CHECK(e.gain_db == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
  }

  // Halving the capacitance amplitude at the highest frequency reads
  // 20 log10(0.5) = -6.0206 dB.
  std::vector<SineSeries> rolled = flat;
  rolled[0] = synth_series(1.0, 2.0, 16.5, 256, 900.0);
  const std::vector<GainEntry> att = compute_gain_table(rolled);
  CHECK(att[2].gain_db == doctest::Approx(-6.0205999133).epsilon(1e-6));
  CHECK(att[0].gain_db == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("gain table rejects unusable series") {
  CHECK_THROWS_AS(compute_gain_table(std::vector<SineSeries>{}), NumericError);

  // Zero displacement amplitude: gain undefined.
  SineSeries still = synth_series(0.1, 0.0, 33.0, 64);
  CHECK_THROWS_AS(compute_gain_table(std::vector<SineSeries>{still}),
                  NumericError);

  // Displacement channel that is not a sinusoid at the stated frequency.
  SineSeries ramp = synth_series(0.1, 1.0, 33.0, 64);
  for (std::size_t i = 0; i < ramp.disp_mm.size(); ++i)
    ramp.disp_mm[i] = 0.05 * static_cast<double>(i);
  CHECK_THROWS_WITH_AS(compute_gain_table(std::vector<SineSeries>{ramp}),
                       doctest::Contains("not sinusoidal"), NumericError);
}
