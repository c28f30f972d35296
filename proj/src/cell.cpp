#include "desens/cell.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace desens {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void MaterialFilm::validate() const {
  require(finite_positive(relative_permittivity),
          "film: relative_permittivity must be > 0");
  require(finite_positive(initial_thickness_mm),
          "film: initial_thickness_mm must be > 0");
  require(std::isfinite(pre_stretch) && pre_stretch >= 1.0,
          "film: pre_stretch must be >= 1");
  require(std::isfinite(max_stretch) && max_stretch >= pre_stretch,
          "film: max_stretch must be >= pre_stretch");
  require(layer_count >= 1, "film: layer_count must be >= 1");
}

void CellGeometry::validate() const {
  film.validate();
  require(finite_positive(lower_base_mm), "cell: lower_base_mm must be > 0");
  require(finite_positive(upper_base_mm), "cell: upper_base_mm must be > 0");
  require(finite_positive(initial_height_mm),
          "cell: initial_height_mm must be > 0");
}

double CellGeometry::k_pf_per_mm2() const {
  // SI kernel: k = eps_r eps_0 b / (h0 d0)  [F/m^2], then F->pF and
  // 1/m^2 -> 1/mm^2.
  const double b_m = mean_base_mm() * 1e-3;
  const double h0_m = initial_height_mm * 1e-3;
  const double d0_m = film.initial_thickness_mm * 1e-3;
  const double k_si = MaterialFilm::kVacuumPermittivity *
                      film.relative_permittivity * b_m / (h0_m * d0_m) *
                      film.layer_count;
  return k_si * 1e12 * 1e-6;
}

double CellGeometry::unstretched_length_mm() const {
  return initial_height_mm / film.pre_stretch;
}

double flat_capacitance_pf(double area_mm2, double thickness_mm,
                           const MaterialFilm& film) {
  film.validate();
  require(std::isfinite(area_mm2) && area_mm2 >= 0.0,
          "flat_capacitance: area must be >= 0");
  require(std::isfinite(thickness_mm) && thickness_mm > 0.0,
          "flat_capacitance: thickness must be > 0");
  const double area_m2 = area_mm2 * 1e-6;
  const double d_m = thickness_mm * 1e-3;
  const double c_f = MaterialFilm::kVacuumPermittivity *
                     film.relative_permittivity * area_m2 / d_m *
                     film.layer_count;
  return c_f * 1e12;
}

double cell_capacitance_pf(const CellGeometry& cell, double y_mm) {
  cell.validate();
  require(std::isfinite(y_mm), "cell_capacitance: displacement must be finite");
  const double h = cell.initial_height_mm + y_mm;
  if (h <= 0.0)
    throw std::domain_error("cell collapsed: height " + std::to_string(h) +
                            " mm at displacement " + std::to_string(y_mm) +
                            " mm");
  return cell.k_pf_per_mm2() * h * h;
}

CellSensitivity cell_sensitivity(const CellGeometry& cell, double y_mm) {
  cell.validate();
  require(std::isfinite(y_mm), "cell_sensitivity: displacement must be finite");
  const double h = cell.initial_height_mm + y_mm;
  if (h <= 0.0)
    throw std::domain_error("cell collapsed: height " + std::to_string(h) +
                            " mm at displacement " + std::to_string(y_mm) +
                            " mm");
  return CellSensitivity{2.0 * cell.k_pf_per_mm2() * h, 0.0};
}

}  // namespace desens
