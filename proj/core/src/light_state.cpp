#include "qstreak/light_state.hpp"

#include <cmath>
#include <string>

#include "qstreak/errors.hpp"
#include "qstreak/units.hpp"

namespace qstreak {

namespace {

double wrap_two_pi(double angle) {
  const double two_pi = 2.0 * units::pi;
  double a = std::fmod(angle, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

}  // namespace

double LightState::alpha_x() const { return alpha_mag * std::cos(phi); }
double LightState::alpha_y() const { return alpha_mag * std::sin(phi); }

LightState make_exact_state(double alpha_mag, double phi, double r, double theta,
                            double omega, double e_vac) {
  LightState s;
  s.mode = LightMode::exact;
  s.alpha_mag = alpha_mag;
  s.phi = phi;
  s.r = r;
  s.theta = wrap_two_pi(theta);
  s.omega = omega;
  s.e_vac = e_vac;
  s.e_coh = 2.0 * alpha_mag * e_vac;
  s.e_sq = std::exp(r) * e_vac;
  validate(s);
  return s;
}

LightState make_macroscopic_state(double e_coh, double e_sq, double phi,
                                  double theta, double omega) {
  LightState s;
  s.mode = LightMode::macroscopic;
  s.phi = phi;
  s.theta = wrap_two_pi(theta);
  s.omega = omega;
  s.e_coh = e_coh;
  s.e_sq = e_sq;
  validate(s);
  return s;
}

LightState make_macroscopic_state_from_intensity(double i_coh_wcm2, double i_sq_wcm2,
                                                 double phi, double theta, double omega) {
  return make_macroscopic_state(intensity_to_field(i_coh_wcm2),
                                intensity_to_field(i_sq_wcm2), phi, theta, omega);
}

void validate(const LightState& s) {
  if (!(s.omega > 0.0)) throw ValidationError("light state: omega must be positive");
  if (s.mode == LightMode::exact) {
    if (s.alpha_mag < 0.0) throw ValidationError("light state: |alpha| must be >= 0");
    if (s.r < 0.0) throw ValidationError("light state: r must be >= 0");
    if (s.e_vac < 0.0) throw ValidationError("light state: E_V must be >= 0");
  } else {
    if (s.e_coh < 0.0 || s.e_sq < 0.0) {
      throw ValidationError("light state: field scales must be >= 0");
    }
  }
}

FieldScales scales(const LightState& s) {
  FieldScales f;
  f.e_coh = s.e_coh;
  f.e_sq = s.e_sq;
  f.i_coh = units::field_to_intensity(s.e_coh);
  f.i_sq = units::field_to_intensity(s.e_sq);
  return f;
}

double weight_beta(const LightState& s, PhaseSpacePoint p) {
  if (s.mode != LightMode::exact) {
    throw ValidationError("weight_beta requires an exact-mode light state");
  }
  const double dx = p.bx - s.alpha_x();
  const double dy = p.by - s.alpha_y();
  const double ch = std::cos(0.5 * s.theta);
  const double sh = std::sin(0.5 * s.theta);
  const double anti = dx * sh - dy * ch;  // along the anti-squeezed axis
  const double sq = dx * ch + dy * sh;    // along the squeezed axis
  const double arg = -2.0 * std::exp(-2.0 * s.r) * anti * anti
                     - 2.0 * std::exp(2.0 * s.r) * sq * sq;
  return 2.0 / units::pi * std::exp(arg);
}

BetaCovariance beta_covariance(const LightState& s) {
  if (s.mode != LightMode::exact) {
    throw ValidationError("beta_covariance requires an exact-mode light state");
  }
  BetaCovariance c;
  c.mean_x = s.alpha_x();
  c.mean_y = s.alpha_y();
  const double ch = std::cos(0.5 * s.theta);
  const double sh = std::sin(0.5 * s.theta);
  c.axis_anti_x = sh;
  c.axis_anti_y = -ch;
  c.axis_sq_x = ch;
  c.axis_sq_y = sh;
  c.var_anti = 0.25 * std::exp(2.0 * s.r);
  c.var_sq = 0.25 * std::exp(-2.0 * s.r);
  c.cxx = c.var_anti * sh * sh + c.var_sq * ch * ch;
  c.cyy = c.var_anti * ch * ch + c.var_sq * sh * sh;
  c.cxy = -c.var_anti * sh * ch + c.var_sq * ch * sh;
  return c;
}

double noise_kernel(const LightState& s, const Envelope& env, double t, double t_prime) {
  const double ff = envelope_value(env, t) * envelope_value(env, t_prime);
  const double cm = std::cos(s.omega * (t - t_prime));
  const double cp = std::cos(s.omega * (t + t_prime) - s.theta);
  if (s.mode == LightMode::exact) {
    const double pref = s.e_vac * s.e_vac / (s.omega * s.omega);
    return pref * ff * (std::cosh(2.0 * s.r) * cm - std::sinh(2.0 * s.r) * cp);
  }
  const double pref = 0.5 * s.e_sq * s.e_sq / (s.omega * s.omega);
  return pref * ff * (cm - cp);
}

MacroscopicField macroscopic_reduce(const LightState& s) {
  if (s.e_coh == 0.0 && s.e_sq == 0.0) {
    throw ValidationError("macroscopic_reduce: degenerate state, E_c = E_s = 0");
  }
  MacroscopicField m;
  m.center_x = s.e_coh * std::cos(s.phi);
  m.center_y = s.e_coh * std::sin(s.phi);
  m.axis_x = std::sin(0.5 * s.theta);
  m.axis_y = -std::cos(0.5 * s.theta);
  m.sigma = s.e_sq;
  return m;
}

double intensity_to_field(double intensity_wcm2) {
  if (intensity_wcm2 < 0.0) {
    throw ValidationError("intensity must be >= 0, got " + std::to_string(intensity_wcm2));
  }
  return std::sqrt(intensity_wcm2 / units::intensity_au);
}

}  // namespace qstreak
