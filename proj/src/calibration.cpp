#include "desens/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "desens/errors.hpp"
#include "desens/linsolve.hpp"

namespace desens {

namespace {

struct Centered {
  double mean = 0.0;
  double scale = 1.0;
};

Centered center_stats(std::span<const double> v) {
  Centered c;
  double sum = 0.0;
  for (double x : v) sum += x;
  c.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - c.mean) * (x - c.mean);
  c.scale = std::sqrt(ss / static_cast<double>(v.size()));
  return c;
}

std::string fmt(double v) { return std::to_string(v); }

}  // namespace

double dc_ac_pf(const CapacitanceSample& s) { return s.c_a_pf - s.c_c_pf; }
double dc_bd_pf(const CapacitanceSample& s) { return s.c_b_pf - s.c_d_pf; }

CalibratedPlane fit_plane(std::span<const PlaneSample> samples) {
  const std::size_t n = samples.size();
  if (n < 3)
    throw NumericError("fit_plane: need at least 3 samples, got " +
                       std::to_string(n));
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = samples[i].x_mm;
    ys[i] = samples[i].y_mm;
  }
  const Centered cx = center_stats(xs);
  const Centered cy = center_stats(ys);

  double mdc = 0.0;
  for (const PlaneSample& s : samples) mdc += s.dc_pf;
  mdc /= static_cast<double>(n);

  // Normal equations in centered, variance-scaled coordinates
  // u = (x - mx)/sx, v = (y - my)/sy.
  double suu = 0.0, svv = 0.0, suv = 0.0, su = 0.0, sv = 0.0;
  double suw = 0.0, svw = 0.0, sw = 0.0;
  const bool degenerate_u = !(cx.scale > 0.0);
  const bool degenerate_v = !(cy.scale > 0.0);
  if (!degenerate_u && !degenerate_v) {
    for (const PlaneSample& s : samples) {
      const double u = (s.x_mm - cx.mean) / cx.scale;
      const double v = (s.y_mm - cy.mean) / cy.scale;
      const double w = s.dc_pf - mdc;
      suu += u * u;
      svv += v * v;
      suv += u * v;
      su += u;
      sv += v;
      suw += u * w;
      svw += v * w;
      sw += w;
    }
  }
  const double det2 = suu * svv - suv * suv;
  if (degenerate_u || degenerate_v || det2 <= 1e-12 * suu * svv ||
      !(det2 > 0.0)) {
    throw NumericError(
        "fit_plane: rank-deficient calibration positions (collinear or "
        "constant); design moments n=" +
        std::to_string(n) + " Suu=" + fmt(suu) + " Svv=" + fmt(svv) +
        " Suv=" + fmt(suv) + " sx=" + fmt(cx.scale) + " sy=" + fmt(cy.scale));
  }

  const auto coef = detail::solve3(
      {{{suu, suv, su}, {suv, svv, sv}, {su, sv, static_cast<double>(n)}}},
      {suw, svw, sw});

  CalibratedPlane plane;
  plane.alpha_pf_per_mm = coef[0] / cx.scale;
  plane.beta_pf_per_mm = coef[1] / cy.scale;
  plane.gamma_pf = mdc + coef[2] - coef[0] * cx.mean / cx.scale -
                   coef[1] * cy.mean / cy.scale;

  // Collinearity indicator: eigenvalue ratio of the scaled displacement
  // block [[Suu, Suv], [Suv, Svv]].
  const double tr = suu + svv;
  const double disc = std::sqrt(std::max(0.25 * tr * tr - det2, 0.0));
  const double lo = 0.5 * tr - disc;
  plane.condition_indicator = lo > 0.0 ? (0.5 * tr + disc) / lo
                                       : std::numeric_limits<double>::infinity();

  double ssr = 0.0;
  for (const PlaneSample& s : samples) {
    const double r = s.dc_pf - (plane.alpha_pf_per_mm * s.x_mm +
                                plane.beta_pf_per_mm * s.y_mm + plane.gamma_pf);
    ssr += r * r;
  }
  plane.fit_rms_pf = std::sqrt(ssr / static_cast<double>(n));
  return plane;
}

CalibratedParabola fit_parabola(std::span<const ParabolaSample> samples) {
  const std::size_t n = samples.size();
  if (n < 3)
    throw NumericError("fit_parabola: need at least 3 samples, got " +
                       std::to_string(n));
  std::set<double> distinct;
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    ys[i] = samples[i].y_mm;
    distinct.insert(samples[i].y_mm);
  }
  if (distinct.size() < 3)
    throw NumericError(
        "fit_parabola: need at least 3 distinct displacement values, got " +
        std::to_string(distinct.size()));

  const Centered cy = center_stats(ys);
  // cy.scale > 0 is guaranteed by >= 3 distinct values.
  double s1 = static_cast<double>(n), su = 0.0, suu = 0.0, suuu = 0.0,
         suuuu = 0.0;
  double sc = 0.0, suc = 0.0, suuc = 0.0;
  for (const ParabolaSample& s : samples) {
    const double u = (s.y_mm - cy.mean) / cy.scale;
    const double uu = u * u;
    su += u;
    suu += uu;
    suuu += uu * u;
    suuuu += uu * uu;
    sc += s.c_pf;
    suc += u * s.c_pf;
    suuc += uu * s.c_pf;
  }

  std::array<double, 3> coef;
  try {
    coef = detail::solve3({{{s1, su, suu}, {su, suu, suuu}, {suu, suuu, suuuu}}},
                          {sc, suc, suuc});
  } catch (const NumericError&) {
    throw NumericError(
        "fit_parabola: degenerate displacement design (values too clustered "
        "to resolve a quadratic)");
  }

  // Back to physical coordinates: C = c2 y^2 + c1 y + c0.
  const double m = cy.mean;
  const double s = cy.scale;
  const double c2 = coef[2] / (s * s);
  const double c1 = coef[1] / s - 2.0 * coef[2] * m / (s * s);
  const double c0 = coef[0] - coef[1] * m / s + coef[2] * m * m / (s * s);

  // In the scaled coordinates the curvature must be resolvable against the
  // other fitted terms; otherwise straight-line data would round to a tiny
  // spurious c2 of either sign.
  const double coef_mag =
      std::max({std::abs(coef[0]), std::abs(coef[1]), std::abs(coef[2])});
  if (!(coef[2] > 1e-9 * coef_mag) || !(c2 > 0.0))
    throw NumericError(
        "fit_parabola: surface not convex (quadratic coefficient " + fmt(c2) +
        " <= 0); data does not match the quadratic cell model");
  CalibratedParabola parab;
  parab.h0_mm = c1 / (2.0 * c2);
  parab.c0_pf = c0;
  if (!(parab.h0_mm > 0.0))
    throw NumericError(
        "fit_parabola: extracted initial height " + fmt(parab.h0_mm) +
        " mm is not positive; the cell shrinks along this axis — flip the "
        "displacement sign and refit");
  if (!(parab.c0_pf > 0.0))
    throw NumericError("fit_parabola: extracted rest capacitance " +
                       fmt(parab.c0_pf) + " pF is not positive");

  double ssr = 0.0;
  const double kk = parab.c0_pf / (parab.h0_mm * parab.h0_mm);
  for (const ParabolaSample& smp : samples) {
    const double h = parab.h0_mm + smp.y_mm;
    const double r = smp.c_pf - kk * h * h;
    ssr += r * r;
  }
  parab.fit_rms_pf = std::sqrt(ssr / static_cast<double>(n));
  return parab;
}

DeviationReport deviation(const CalibratedPlane& plane,
                          std::span<const PlaneSample> samples,
                          Axis primary_axis, std::string calibration_set,
                          std::string evaluation_set) {
  if (samples.empty())
    throw NumericError("deviation: no evaluation samples");
  const bool primary_y = primary_axis == Axis::y;
  const double primary =
      primary_y ? plane.beta_pf_per_mm : plane.alpha_pf_per_mm;
  const double cross = primary_y ? plane.alpha_pf_per_mm : plane.beta_pf_per_mm;
  if (!(std::abs(primary) > 10.0 * std::abs(cross)))
    throw NumericError(
        "deviation: plane not invertible along its primary axis (|primary "
        "slope| " +
        fmt(std::abs(primary)) + " must exceed 10x |cross slope| " +
        fmt(std::abs(cross)) + ")");

  DeviationReport report;
  report.calibration_set = std::move(calibration_set);
  report.evaluation_set = std::move(evaluation_set);
  report.n_points = static_cast<int>(samples.size());
  double ssr = 0.0;
  for (const PlaneSample& s : samples) {
    const double secondary = primary_y ? s.x_mm : s.y_mm;
    const double truth = primary_y ? s.y_mm : s.x_mm;
    const double rec = (s.dc_pf - plane.gamma_pf - cross * secondary) / primary;
    const double err = rec - truth;
    ssr += err * err;
    report.max_mm = std::max(report.max_mm, std::abs(err));
  }
  report.rms_mm = std::sqrt(ssr / static_cast<double>(samples.size()));
  return report;
}

}  // namespace desens
