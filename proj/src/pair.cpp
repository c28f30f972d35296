#include "desens/pair.hpp"

#include <cmath>
#include <stdexcept>

namespace desens {

void CellPair::validate() const {
  cell_1.validate();
  cell_2.validate();
  if (!(cell_1.film == cell_2.film))
    throw std::domain_error(
        "pair: both cells must share the same membrane (one film, one "
        "initial thickness)");
}

double CellPair::initial_offset_pf() const {
  return cell_capacitance_pf(cell_1, 0.0) - cell_capacitance_pf(cell_2, 0.0);
}

double differential_capacitance_pf(const CellPair& pair, double y_mm) {
  pair.validate();
  return cell_capacitance_pf(pair.cell_1, y_mm) -
         cell_capacitance_pf(pair.cell_2, -y_mm);
}

double differential_sensitivity_pf_per_mm(const CellPair& pair, double y_mm) {
  pair.validate();
  // d/dy [k1 (h01 + y)^2 - k2 (h02 - y)^2] = 2 [k1 (h01 + y) + k2 (h02 - y)].
  return cell_sensitivity(pair.cell_1, y_mm).dc_dy_pf_per_mm +
         cell_sensitivity(pair.cell_2, -y_mm).dc_dy_pf_per_mm;
}

double linearity_error(const CellPair& pair, Interval y_range) {
  pair.validate();
  if (!std::isfinite(y_range.lo_mm) || !std::isfinite(y_range.hi_mm) ||
      !(y_range.lo_mm < y_range.hi_mm))
    throw std::domain_error("linearity_error: empty or invalid interval");
  // Both cells must stay inflated across the whole range; the extremes are
  // at the interval ends.
  (void)differential_capacitance_pf(pair, y_range.lo_mm);
  (void)differential_capacitance_pf(pair, y_range.hi_mm);

  const double half_width = 0.5 * (y_range.hi_mm - y_range.lo_mm);
  const double mid = 0.5 * (y_range.lo_mm + y_range.hi_mm);
  const double quad = pair.cell_1.k_pf_per_mm2() - pair.cell_2.k_pf_per_mm2();
  const double slope_mid = differential_sensitivity_pf_per_mm(pair, mid);
  // Continuous least-squares line over the interval: the quadratic's
  // residual is quad * (u^2 - L^2/3) in the centered coordinate, maximal at
  // the ends with value (2/3) |quad| L^2; normalize by |slope| * width.
  return (std::abs(quad) * half_width) / (3.0 * std::abs(slope_mid));
}

}  // namespace desens
