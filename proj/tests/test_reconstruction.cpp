#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "desens/errors.hpp"
#include "desens/presets.hpp"
#include "desens/reconstruction.hpp"
#include "desens/simulator.hpp"

using namespace desens;

namespace {

CalibratedPlane make_plane(double alpha, double beta, double gamma) {
  CalibratedPlane p;
  p.alpha_pf_per_mm = alpha;
  p.beta_pf_per_mm = beta;
  p.gamma_pf = gamma;
  return p;
}

double dc_of(const CalibratedPlane& p, double x, double y) {
  return p.alpha_pf_per_mm * x + p.beta_pf_per_mm * y + p.gamma_pf;
}

}  // namespace

TEST_CASE("plane inversion recovers the exact commanded position") {
  const CalibratedPlane ac = make_plane(0.5, -69.4, 31.0);
  const CalibratedPlane bd = make_plane(-69.5, -0.5007, 47.0);

  for (double x : {-15.0, -4.2, 0.0, 9.81, 15.0})
    for (double y : {-15.0, -0.3, 7.0, 15.0}) {
      const Vec2 pos = reconstruct_xy(ac, bd, dc_of(ac, x, y), dc_of(bd, x, y));
      CHECK(pos.x_mm == doctest::Approx(x).epsilon(1e-12).scale(1.0));
      CHECK(pos.y_mm == doctest::Approx(y).epsilon(1e-12).scale(1.0));
    }

  // Round trip through the virtual sensor: simulate a pose on the as-built
  // device, invert with its true planes, recover the pose.
  const SensorLayout layout = mismatched_layout();
  const CapacitanceSample s = simulate_sample(layout, FramePose{6.0, -11.0});
  const Vec2 pos =
      reconstruct_xy(mismatched_truth_ac(), mismatched_truth_bd(), s);
  CHECK(pos.x_mm == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(pos.y_mm == doctest::Approx(-11.0).epsilon(1e-9));
}

TEST_CASE("near-parallel planes are rejected as unobservable") {
  const CalibratedPlane ac = make_plane(0.5, -69.4, 31.0);
  // Same gradient direction -> the 2x2 system is singular.
  const CalibratedPlane parallel = make_plane(1.0, -138.8, 5.0);
  CHECK_THROWS_AS(reconstruct_xy(ac, parallel, 0.0, 0.0), NumericError);
  // Degenerate zero plane as well.
  CHECK_THROWS_AS(
      reconstruct_xy(make_plane(0.0, 0.0, 1.0), make_plane(0.0, 0.0, 2.0),
                     0.0, 0.0),
      NumericError);
}

TEST_CASE("tip fusion extrapolates along the line through both planes") {
  RobotGeometry geom;
  geom.plane_separation_mm = 200.0;
  geom.tip_extension_mm = 200.0;
  CHECK_NOTHROW(geom.validate());

  // Equal separation and extension: tip = 2 est1 - est2.
  const Vec2 tip = fuse_tip({1.0, 4.0}, {0.5, 1.0}, geom);
  CHECK(tip.x_mm == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(tip.y_mm == doctest::Approx(7.0).epsilon(1e-15));

  // Zero extension: the tip sits in the plane of sensor 1.
  RobotGeometry flush = geom;
  flush.tip_extension_mm = 0.0;
  const Vec2 at1 = fuse_tip({1.0, 4.0}, {0.5, 1.0}, flush);
  CHECK(at1.x_mm == 1.0);
  CHECK(at1.y_mm == 4.0);

  // Collinearity: the fused tip always lies on the est2 -> est1 line, at
  // parameter (l12 + lp) / l12 measured from est2.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  for (int i = 0; i < 50; ++i) {
    const Vec2 e1{u(rng), u(rng)};
    const Vec2 e2{u(rng), u(rng)};
    RobotGeometry g;
    g.plane_separation_mm = 100.0 + 300.0 * (i % 7) / 6.0;
    g.tip_extension_mm = 500.0 * (i % 5) / 4.0;
    const Vec2 t = fuse_tip(e1, e2, g);
    const double s =
        (g.plane_separation_mm + g.tip_extension_mm) / g.plane_separation_mm;
    CHECK(t.x_mm == doctest::Approx(e2.x_mm + s * (e1.x_mm - e2.x_mm))
                        .epsilon(1e-12)
                        .scale(1.0));
    CHECK(t.y_mm == doctest::Approx(e2.y_mm + s * (e1.y_mm - e2.y_mm))
                        .epsilon(1e-12)
                        .scale(1.0));
  }

  RobotGeometry bad;
  bad.plane_separation_mm = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad.plane_separation_mm = 200.0;
  bad.tip_extension_mm = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("error propagation: frozen values and Monte Carlo agreement") {
  RobotGeometry geom;
  geom.plane_separation_mm = 200.0;
  geom.tip_extension_mm = 200.0;

  // Equal 0.2 mm per-plane errors with lp = l12: sqrt(4 + 1) * 0.2.
  CHECK(propagate_error_mm(0.2, 0.2, geom) ==
        doctest::Approx(0.4472135955).epsilon(1e-9));

  // Longer tip extension amplifies the tip error.
  RobotGeometry longer = geom;
  longer.tip_extension_mm = 400.0;
  CHECK(propagate_error_mm(0.2, 0.2, longer) ==
        doctest::Approx(0.7211103).epsilon(1e-6));

  // Monte Carlo: perturb both plane estimates with independent Gaussian
  // errors and measure the tip spread per axis.
  const double sigma1 = 0.2, sigma2 = 0.2;
  const double predicted = propagate_error_mm(sigma1, sigma2, geom);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n1(0.0, sigma1), n2(0.0, sigma2);
  const int trials = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < trials; ++i) {
    const Vec2 tip = fuse_tip({n1(rng), n1(rng)}, {n2(rng), n2(rng)}, geom);
    sum += tip.x_mm;
    sum2 += tip.x_mm * tip.x_mm;
  }
  const double mean = sum / trials;
  const double std = std::sqrt(sum2 / trials - mean * mean);
  CHECK(std == doctest::Approx(predicted).epsilon(0.02));

  CHECK_THROWS_AS(propagate_error_mm(-0.1, 0.2, geom), std::domain_error);
}

TEST_CASE("worst-case tip error: frozen value, dominates the RSS bound") {
  RobotGeometry geom;
  geom.plane_separation_mm = 200.0;
  geom.tip_extension_mm = 200.0;

  // 1.02 mm worst per-plane deviation, lp = l12: 1.02 * (1 + 2).
  CHECK(worst_case_error_mm(1.02, geom) == doctest::Approx(3.06).epsilon(1e-12));

  // Achievability: opposite-sign deviations of max_dev at the two planes
  // land the tip exactly worst_case away from truth.
  const double d = 1.02;
  const Vec2 tip = fuse_tip({d, 0.0}, {-d, 0.0}, geom);
  CHECK(std::abs(tip.x_mm) == doctest::Approx(worst_case_error_mm(d, geom))
                                  .epsilon(1e-12));

  for (double dev : {0.1, 0.5, 1.02, 2.0}) {
    CHECK(worst_case_error_mm(dev, geom) >=
          propagate_error_mm(dev, dev, geom));
    // Linear in the deviation.
    CHECK(worst_case_error_mm(2.0 * dev, geom) ==
          doctest::Approx(2.0 * worst_case_error_mm(dev, geom))
              .epsilon(1e-12));
  }
}

TEST_CASE("pose estimation fuses both planes with tilts and uncertainty") {
  const CalibratedPlane ac = make_plane(0.5, -69.4, 31.0);
  const CalibratedPlane bd = make_plane(-69.5, -0.5007, 47.0);
  RobotGeometry geom;
  geom.plane_separation_mm = 200.0;
  geom.tip_extension_mm = 200.0;

  // Sensor 1 at (2, 5), sensor 2 at (1, 3): synthesize exact readings for
  // both planes from the same calibration.
  CapacitanceSample s1, s2;
  s1.t_s = 42.0;
  s1.c_a_pf = dc_of(ac, 2.0, 5.0);
  s1.c_c_pf = 0.0;
  s1.c_b_pf = dc_of(bd, 2.0, 5.0);
  s1.c_d_pf = 0.0;
  s2.t_s = 42.0;
  s2.c_a_pf = dc_of(ac, 1.0, 3.0);
  s2.c_c_pf = 0.0;
  s2.c_b_pf = dc_of(bd, 1.0, 3.0);
  s2.c_d_pf = 0.0;

  const PoseEstimate pose =
      estimate_pose(ac, bd, ac, bd, s1, s2, geom, 0.2, 0.2);
  CHECK(pose.t_s == 42.0);
  CHECK(pose.sensor1.x_mm == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(pose.sensor1.y_mm == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(pose.sensor2.x_mm == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pose.sensor2.y_mm == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(pose.tip.x_mm == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(pose.tip.y_mm == doctest::Approx(7.0).epsilon(1e-9));
  CHECK(pose.tip_sigma_mm ==
        doctest::Approx(propagate_error_mm(0.2, 0.2, geom)).epsilon(1e-12));
  CHECK(pose.tilt_yz_rad == doctest::Approx(std::atan2(2.0, 200.0)).epsilon(1e-9));
  CHECK(pose.tilt_xz_rad == doctest::Approx(std::atan2(1.0, 200.0)).epsilon(1e-9));
}
