#pragma once

#include "qstreak/envelope.hpp"
#include "qstreak/light_state.hpp"

namespace qstreak {

struct XuvPulse {
  double photon_energy = 0.0;  // a.u.
  double peak_field = 0.0;     // a.u.
  Envelope envelope;           // centered at t = 0; the delay is applied externally
};

// cosine-squared envelope whose field-envelope FWHM is duration_fwhm
XuvPulse make_xuv_pulse(double photon_energy_au, double peak_field_au, double duration_fwhm_au);

// A_XUV(t) = (peak_field / photon_energy) f(t) cos(photon_energy t)
double a_xuv(const XuvPulse& pulse, double t);

// One ensemble member: the classical IR vector potential
//   A(t) = f(t)/omega (ex cos wt + ey sin wt)
// with (ex, ey) the member's field-plane amplitude. For an exact-mode member
// at beta, (ex, ey) = 2 E_V (beta_x, beta_y); for a macroscopic member with
// on-axis amplitude s, (ex, ey) = center + s * axis of the reduced 1D weight.
struct IrRealization {
  double ex = 0.0;
  double ey = 0.0;
  double omega = 0.0;
  Envelope envelope;
};

double a_cl_beta(const IrRealization& real, double t);

// A_cl(t) = (E_c / omega) f(t) cos(wt - phi), the distribution-center member
double a_cl_coherent(const LightState& state, const Envelope& env, double t);

IrRealization realization_from_beta(const LightState& state, const Envelope& env,
                                    PhaseSpacePoint beta);
IrRealization realization_from_amplitude(const LightState& state, const Envelope& env,
                                         double s);
IrRealization coherent_realization(const LightState& state, const Envelope& env);

}  // namespace qstreak
