#pragma once

#include "qstreak/units.hpp"

namespace qstreak {

// 1D spatial grid and numerical parameters of the propagation.
// V_C(x) = -1/sqrt(x^2 + softcore_a2).
struct SpatialGrid {
  double x_min = -600.0;
  double x_max = 600.0;
  int n_points = 8192;           // power of two
  double dt = 0.0125;            // a.u.
  double absorber_width = 100.0; // a.u.; 0 disables the absorbing mask
  double softcore_a2 = 2.0;
  double mask_radius = 20.0;     // bound-state exclusion radius for extraction
  double mask_ramp = 10.0;       // width of the smooth extraction-mask edge

  double length() const { return x_max - x_min; }
  double dx() const { return length() / n_points; }
  double x(int i) const { return x_min + i * dx(); }
  double dp() const { return 2.0 * units::pi / length(); }
  // FFT-ordered momentum of bin k (non-negative first, then negative)
  double p(int k) const {
    const int m = (k < n_points / 2) ? k : k - n_points;
    return m * dp();
  }
  double potential(double xx) const;
};

void validate(const SpatialGrid& grid);

}  // namespace qstreak
