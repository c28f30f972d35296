#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "desens/cell.hpp"
#include "desens/presets.hpp"

using namespace desens;

TEST_CASE("flat capacitance reproduces the parallel-plate law") {
  MaterialFilm vacuum_like;
  vacuum_like.relative_permittivity = 1.0;
  vacuum_like.initial_thickness_mm = 1.0;
  vacuum_like.layer_count = 1;
  // eps_0 * 100 mm^2 / 1 mm = 8.854e-12 F/m * 0.1 m = 0.8854 pF.
  CHECK(flat_capacitance_pf(100.0, 1.0, vacuum_like) ==
        doctest::Approx(0.8854).epsilon(1e-12));

  MaterialFilm film = default_film();
  // Scaling laws: C ~ eps_r * area * layers / thickness.
  const double base = flat_capacitance_pf(100.0, 0.11, film);
  MaterialFilm doubled_eps = film;
  doubled_eps.relative_permittivity *= 2.0;
  CHECK(flat_capacitance_pf(100.0, 0.11, doubled_eps) ==
        doctest::Approx(2.0 * base).epsilon(1e-12));
  CHECK(flat_capacitance_pf(100.0, 2.0 * 0.11, film) ==
        doctest::Approx(0.5 * base).epsilon(1e-12));
  MaterialFilm two_layers = film;
  two_layers.layer_count = 2;
  CHECK(flat_capacitance_pf(100.0, 0.11, two_layers) ==
        doctest::Approx(2.0 * base).epsilon(1e-12));
  CHECK(flat_capacitance_pf(200.0, 0.11, film) ==
        doctest::Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("reference cell rest capacitance and quadratic coefficient") {
  const CellGeometry cell = prototype_cell();
  CHECK(cell.mean_base_mm() == doctest::Approx(65.0));
  // k = eps_r eps_0 b / (h0 d0) = 3.2 * 8.854e-12 * 1e9 * 65 / (55 * 0.11).
  CHECK(cell.k_pf_per_mm2() == doctest::Approx(0.30440198347107437).epsilon(1e-12));
  // C0 = k h0^2 ~ 0.92 nF.
  CHECK(cell_capacitance_pf(cell, 0.0) ==
        doctest::Approx(920.8160000000).epsilon(1e-12));
  // Frozen spot values on the stretch axis.
  CHECK(cell_capacitance_pf(cell, 5.0) ==
        doctest::Approx(1095.8471404958677).epsilon(1e-12));
  CHECK(cell_capacitance_pf(cell, 15.0) ==
        doctest::Approx(1491.5697190082643).epsilon(1e-12));
  CHECK(cell_capacitance_pf(cell, -15.0) ==
        doctest::Approx(487.04317355371896).epsilon(1e-12));
  CHECK(cell.unstretched_length_mm() ==
        doctest::Approx(55.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("quadratic response equals the first-principles membrane model") {
  // Independent derivation: stretching the cell to height h changes the
  // electrode area to b*h while volume conservation thins the film to
  // d0*h0/h; the parallel-plate law on those quantities must agree with the
  // closed-form k*h^2 for every displacement.
  const CellGeometry cell = prototype_cell();
  const double h0 = cell.initial_height_mm;
  const double d0 = cell.film.initial_thickness_mm;
  for (double y = -30.0; y <= 30.0; y += 1.25) {
    const double h = h0 + y;
    const double area = cell.mean_base_mm() * h;
    const double thickness = d0 * h0 / h;
    CHECK(cell_capacitance_pf(cell, y) ==
          doctest::Approx(flat_capacitance_pf(area, thickness, cell.film))
              .epsilon(1e-12));
  }
}

TEST_CASE("cell sensitivity matches the analytic derivative") {
  const CellGeometry cell = prototype_cell();
  const double k = cell.k_pf_per_mm2();
  const CellSensitivity at_rest = cell_sensitivity(cell, 0.0);
  CHECK(at_rest.dc_dy_pf_per_mm ==
        doctest::Approx(2.0 * k * 55.0).epsilon(1e-12));
  CHECK(at_rest.dc_dy_pf_per_mm == doctest::Approx(33.484218).epsilon(1e-6));
  CHECK(at_rest.dc_dx_pf_per_mm == 0.0);

  // Central differences confirm d/dy at several displacements.
  for (double y : {-20.0, -5.0, 0.0, 7.5, 25.0}) {
    const double eps = 1e-6;
    const double numeric = (cell_capacitance_pf(cell, y + eps) -
                            cell_capacitance_pf(cell, y - eps)) /
                           (2.0 * eps);
    CHECK(cell_sensitivity(cell, y).dc_dy_pf_per_mm ==
          doctest::Approx(numeric).epsilon(1e-7));
  }
}

TEST_CASE("collapsed cells are rejected with a descriptive error") {
  const CellGeometry cell = prototype_cell();
  CHECK_THROWS_AS(cell_capacitance_pf(cell, -55.0), std::domain_error);
  CHECK_THROWS_AS(cell_capacitance_pf(cell, -80.0), std::domain_error);
  CHECK_THROWS_AS(cell_sensitivity(cell, -55.0), std::domain_error);
  CHECK_NOTHROW(cell_capacitance_pf(cell, -54.999));
}

TEST_CASE("geometry and film validation rejects non-physical values") {
  CellGeometry cell = prototype_cell();
  CHECK_NOTHROW(cell.validate());
  cell.lower_base_mm = -1.0;
  CHECK_THROWS_AS(cell.validate(), std::domain_error);

  cell = prototype_cell();
  cell.initial_height_mm = 0.0;
  CHECK_THROWS_AS(cell.validate(), std::domain_error);

  cell = prototype_cell();
  cell.film.relative_permittivity = 0.0;
  CHECK_THROWS_AS(cell.validate(), std::domain_error);

  cell = prototype_cell();
  cell.film.initial_thickness_mm = -0.1;
  CHECK_THROWS_AS(cell.validate(), std::domain_error);

  cell = prototype_cell();
  cell.film.layer_count = 0;
  CHECK_THROWS_AS(cell.validate(), std::domain_error);

  cell = prototype_cell();
  cell.film.pre_stretch = 0.0;
  CHECK_THROWS_AS(cell.validate(), std::domain_error);

  cell = prototype_cell();
  cell.film.max_stretch = 0.5;  // below the buckling limit 1
  CHECK_THROWS_AS(cell.validate(), std::domain_error);
}
