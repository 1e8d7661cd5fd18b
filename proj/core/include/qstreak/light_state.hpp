#pragma once

#include "qstreak/envelope.hpp"

namespace qstreak {

// A point in the beta phase-space plane (dimensionless mode amplitude).
struct PhaseSpacePoint {
  double bx = 0.0;
  double by = 0.0;
};

struct FieldScales {
  double e_coh = 0.0;  // coherent field amplitude E_c, a.u.
  double e_sq = 0.0;   // squeezed-fluctuation amplitude E_s, a.u.
  double i_coh = 0.0;  // W/cm^2
  double i_sq = 0.0;   // W/cm^2
};

enum class LightMode {
  exact,        // finite |alpha|, r, E_V: full phase-space weight
  macroscopic,  // E_V -> 0 at fixed E_c, E_s: degenerate 1D field distribution
};

// Squeezed-coherent state of the effective IR mode. In exact mode the state
// is D(alpha) S(xi) |0> with alpha = |alpha| e^{i phi}, xi = r e^{i theta};
// the macroscopic mode keeps only the field scales E_c = 2 |alpha| E_V and
// E_s = e^r E_V. theta is stored modulo 2 pi.
struct LightState {
  LightMode mode = LightMode::exact;
  double phi = 0.0;    // coherent phase, rad
  double theta = 0.0;  // squeezing phase, rad, in [0, 2 pi)
  double omega = 0.0;  // carrier angular frequency, a.u.

  // exact-mode parameters (unused in macroscopic mode)
  double alpha_mag = 0.0;
  double r = 0.0;
  double e_vac = 0.0;  // single-photon field scale E_V, a.u.

  // macroscopic field scales; derived from the above in exact mode
  double e_coh = 0.0;
  double e_sq = 0.0;

  double alpha_x() const;
  double alpha_y() const;
};

LightState make_exact_state(double alpha_mag, double phi, double r, double theta,
                            double omega, double e_vac);
LightState make_macroscopic_state(double e_coh, double e_sq, double phi,
                                  double theta, double omega);
LightState make_macroscopic_state_from_intensity(double i_coh_wcm2, double i_sq_wcm2,
                                                 double phi, double theta, double omega);

void validate(const LightState& state);
FieldScales scales(const LightState& state);

// Phase-space weight W(beta) of the squeezed-coherent state: a normalized
// Gaussian centered on alpha whose principal axes are rotated by theta/2,
// with variances e^{2r}/4 (anti-squeezed) and e^{-2r}/4 (squeezed).
// Requires exact mode.
double weight_beta(const LightState& state, PhaseSpacePoint point);

struct BetaCovariance {
  double mean_x = 0.0, mean_y = 0.0;
  double cxx = 0.0, cxy = 0.0, cyy = 0.0;
  // principal axes: axis_sq carries variance e^{-2r}/4, axis_anti e^{2r}/4
  double axis_sq_x = 0.0, axis_sq_y = 0.0;
  double axis_anti_x = 0.0, axis_anti_y = 0.0;
  double var_sq = 0.0, var_anti = 0.0;
  double det() const { return cxx * cyy - cxy * cxy; }
};

BetaCovariance beta_covariance(const LightState& state);

// Two-time covariance nu(t, t') of the effective stochastic vector potential.
// Exact mode:
//   (E_V^2/w^2) f(t) f(t') [cosh(2r) cos w(t-t') - sinh(2r) cos(w(t+t') - theta)]
// Macroscopic mode is the E_V -> 0 limit at fixed E_s:
//   (E_s^2/2w^2) f(t) f(t') [cos w(t-t') - cos(w(t+t') - theta)]
double noise_kernel(const LightState& state, const Envelope& env, double t, double t_prime);

// The E_V -> 0 limit of W(beta) expressed on the physical field plane
// (E_x, E_y) = (2 E_V beta_x, 2 E_V beta_y): a 1D Gaussian of width E_s along
// the anti-squeezed axis, zero width along the orthogonal one.
struct MacroscopicField {
  double center_x = 0.0, center_y = 0.0;  // (E_c cos phi, E_c sin phi)
  double axis_x = 0.0, axis_y = 0.0;      // unit anti-squeezed axis
  double sigma = 0.0;                     // = E_s
};

MacroscopicField macroscopic_reduce(const LightState& state);

// sqrt(I / 3.50945e16); throws ValidationError on negative intensity.
double intensity_to_field(double intensity_wcm2);

}  // namespace qstreak
