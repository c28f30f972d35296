#pragma once

#include <array>
#include <cmath>

#include "desens/errors.hpp"

namespace desens::detail {

/// Solves the 3x3 system A x = b by Gaussian elimination with partial
/// pivoting. Small fixed-size problems (normal equations of the plane,
/// parabola, and sine fits) only — no external solver needed. Throws
/// NumericError when a pivot degenerates relative to the matrix scale.
inline std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a,
                                    std::array<double, 3> b) {
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw NumericError("singular 3x3 system: zero or non-finite matrix");

  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      std::swap(b[pivot], b[col]);
    }
    if (std::abs(a[col][col]) <= 1e-14 * scale)
      throw NumericError("singular 3x3 system: pivot below tolerance");
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }

  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 3; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace desens::detail
