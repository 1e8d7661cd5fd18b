#include "qstreak/fields.hpp"

#include <cmath>

#include "qstreak/errors.hpp"

namespace qstreak {

XuvPulse make_xuv_pulse(double photon_energy_au, double peak_field_au,
                        double duration_fwhm_au) {
  if (!(photon_energy_au > 0.0)) {
    throw ValidationError("XUV photon energy must be positive");
  }
  if (peak_field_au < 0.0 || !(duration_fwhm_au > 0.0)) {
    throw ValidationError("XUV pulse: invalid field or duration");
  }
  XuvPulse p;
  p.photon_energy = photon_energy_au;
  p.peak_field = peak_field_au;
  p.envelope.shape = EnvelopeShape::cosine_squared;
  p.envelope.duration = 2.0 * duration_fwhm_au;  // cos^2 FWHM is half the support
  p.envelope.center = 0.0;
  return p;
}

double a_xuv(const XuvPulse& pulse, double t) {
  const double f = envelope_value(pulse.envelope, t);
  if (f == 0.0) return 0.0;
  return pulse.peak_field / pulse.photon_energy * f * std::cos(pulse.photon_energy * t);
}

double a_cl_beta(const IrRealization& real, double t) {
  const double f = envelope_value(real.envelope, t);
  if (f == 0.0) return 0.0;
  return f / real.omega * (real.ex * std::cos(real.omega * t) +
                           real.ey * std::sin(real.omega * t));
}

double a_cl_coherent(const LightState& state, const Envelope& env, double t) {
  const double f = envelope_value(env, t);
  if (f == 0.0) return 0.0;
  return state.e_coh / state.omega * f * std::cos(state.omega * t - state.phi);
}

IrRealization realization_from_beta(const LightState& state, const Envelope& env,
                                    PhaseSpacePoint beta) {
  if (state.mode != LightMode::exact) {
    throw ValidationError("realization_from_beta requires an exact-mode light state");
  }
  IrRealization r;
  r.ex = 2.0 * state.e_vac * beta.bx;
  r.ey = 2.0 * state.e_vac * beta.by;
  r.omega = state.omega;
  r.envelope = env;
  return r;
}

IrRealization realization_from_amplitude(const LightState& state, const Envelope& env,
                                         double s) {
  const MacroscopicField m = macroscopic_reduce(state);
  IrRealization r;
  r.ex = m.center_x + s * m.axis_x;
  r.ey = m.center_y + s * m.axis_y;
  r.omega = state.omega;
  r.envelope = env;
  return r;
}

IrRealization coherent_realization(const LightState& state, const Envelope& env) {
  IrRealization r;
  r.ex = state.e_coh * std::cos(state.phi);
  r.ey = state.e_coh * std::sin(state.phi);
  r.omega = state.omega;
  r.envelope = env;
  return r;
}

}  // namespace qstreak
