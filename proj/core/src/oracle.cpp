#include "qstreak/oracle.hpp"

#include <cmath>
#include <random>

#include "qstreak/errors.hpp"
#include "qstreak/units.hpp"

namespace qstreak {

double asymptotic_momentum(double p0, double a_cl_value, double noise_value) {
  return p0 - a_cl_value - noise_value;
}

double oracle_mean(const LightState& state, const Envelope& env, double tau, double p0) {
  return p0 - a_cl_coherent(state, env, tau);
}

double oracle_variance(const LightState& state, const Envelope& env, double tau,
                       double sigma0_sq) {
  if (sigma0_sq < 0.0) throw ValidationError("oracle_variance: sigma0_sq must be >= 0");
  return noise_kernel(state, env, tau, tau) + sigma0_sq;
}

OracleMoments monte_carlo_moments(const LightState& state, const Envelope& env,
                                  double tau, long n_samples, std::uint64_t seed,
                                  double p0) {
  if (n_samples < 1000) {
    throw ValidationError("monte_carlo_moments: need at least 10^3 samples");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double a_coh = a_cl_coherent(state, env, tau);
  double sum = 0.0, sum2 = 0.0, sum3 = 0.0, sum4 = 0.0;

  if (state.mode == LightMode::exact) {
    const BetaCovariance cov = beta_covariance(state);
    const double s_sq = std::sqrt(cov.var_sq);
    const double s_anti = std::sqrt(cov.var_anti);
    IrRealization real;
    real.omega = state.omega;
    real.envelope = env;
    for (long i = 0; i < n_samples; ++i) {
      const double zu = gauss(rng);
      const double zv = gauss(rng);
      PhaseSpacePoint beta;
      beta.bx = cov.mean_x + s_sq * zu * cov.axis_sq_x + s_anti * zv * cov.axis_anti_x;
      beta.by = cov.mean_y + s_sq * zu * cov.axis_sq_y + s_anti * zv * cov.axis_anti_y;
      real.ex = 2.0 * state.e_vac * beta.bx;
      real.ey = 2.0 * state.e_vac * beta.by;
      const double noise = a_cl_beta(real, tau) - a_coh;
      const double p = asymptotic_momentum(p0, a_coh, noise);
      const double d = p - p0;
      sum += d;
      sum2 += d * d;
      sum3 += d * d * d;
      sum4 += d * d * d * d;
    }
  } else {
    const MacroscopicField mac = macroscopic_reduce(state);
    IrRealization real;
    real.omega = state.omega;
    real.envelope = env;
    for (long i = 0; i < n_samples; ++i) {
      const double s = mac.sigma * gauss(rng);
      real.ex = mac.center_x + s * mac.axis_x;
      real.ey = mac.center_y + s * mac.axis_y;
      const double noise = a_cl_beta(real, tau) - a_coh;
      const double p = asymptotic_momentum(p0, a_coh, noise);
      const double d = p - p0;
      sum += d;
      sum2 += d * d;
      sum3 += d * d * d;
      sum4 += d * d * d * d;
    }
  }

  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double m2 = sum2 / n - mean * mean;
  const double var = m2 * n / (n - 1.0);
  // central fourth moment, for the variance standard error
  const double m4 = sum4 / n - 4.0 * mean * (sum3 / n) + 6.0 * mean * mean * (sum2 / n) -
                    3.0 * mean * mean * mean * mean;

  OracleMoments out;
  out.tau = tau;
  out.mean_shift = mean;
  out.variance = var;
  out.mean_se = std::sqrt(std::max(0.0, var / n));
  out.var_se = std::sqrt(std::max(0.0, (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n));
  return out;
}

MomentTrace oracle_trace(const LightState& state, const Envelope& env,
                         const std::vector<double>& taus, double sigma0_sq, double p0) {
  MomentTrace trace;
  trace.tau = taus;
  trace.p0 = p0;
  trace.mean_shift.resize(taus.size());
  trace.variance.resize(taus.size());
  for (size_t i = 0; i < taus.size(); ++i) {
    trace.mean_shift[i] = oracle_mean(state, env, taus[i], p0) - p0;
    trace.variance[i] = oracle_variance(state, env, taus[i], sigma0_sq);
  }
  return trace;
}

FocalProfile gaussian_beam_profile(int n_annuli, double max_radius) {
  if (n_annuli < 1 || !(max_radius > 0.0)) {
    throw ValidationError("gaussian_beam_profile: invalid discretization");
  }
  FocalProfile prof;
  prof.rel_intensity.resize(n_annuli);
  prof.weight.resize(n_annuli);
  const double dr = max_radius / n_annuli;
  double total = 0.0;
  for (int i = 0; i < n_annuli; ++i) {
    const double r = (i + 0.5) * dr;  // annulus midpoint, in beam waists
    const double rel = std::exp(-2.0 * r * r);
    prof.rel_intensity[i] = rel;
    prof.weight[i] = rel * r * dr;  // ionization share ~ local intensity x area
    total += prof.weight[i];
  }
  for (double& w : prof.weight) w /= total;
  return prof;
}

MomentTrace focal_average_moments(const LightState& state, const Envelope& env,
                                  const std::vector<double>& taus, double sigma0_sq,
                                  double p0, const FocalProfile& profile) {
  if (profile.rel_intensity.size() != profile.weight.size() || profile.weight.empty()) {
    throw ValidationError("focal_average_moments: malformed profile");
  }
  double wsum = 0.0;
  for (double w : profile.weight) wsum += w;
  if (std::abs(wsum - 1.0) > 1e-9) {
    throw ValidationError("focal_average_moments: profile weights must sum to 1");
  }

  MomentTrace trace;
  trace.tau = taus;
  trace.p0 = p0;
  trace.mean_shift.assign(taus.size(), 0.0);
  trace.variance.assign(taus.size(), 0.0);
  for (size_t k = 0; k < profile.weight.size(); ++k) {
    const double scale = std::sqrt(profile.rel_intensity[k]);
    LightState scaled = state;
    scaled.e_coh *= scale;
    scaled.e_sq *= scale;
    if (state.mode == LightMode::exact) {
      // same scaling realized through the vacuum field scale
      scaled.e_vac *= scale;
    }
    const double w = profile.weight[k];
    for (size_t i = 0; i < taus.size(); ++i) {
      trace.mean_shift[i] += w * (oracle_mean(scaled, env, taus[i], p0) - p0);
      trace.variance[i] += w * oracle_variance(scaled, env, taus[i], sigma0_sq);
    }
  }
  return trace;
}

MomentTrace cep_jitter_moments(const LightState& state, const Envelope& env,
                               const std::vector<double>& taus, double sigma0_sq,
                               double p0, double jitter_sigma_rad, int n_draws,
                               std::uint64_t seed) {
  if (jitter_sigma_rad < 0.0) {
    throw ValidationError("cep_jitter_moments: jitter sigma must be >= 0");
  }
  if (n_draws < 1) throw ValidationError("cep_jitter_moments: need n_draws >= 1");

  MomentTrace trace;
  trace.tau = taus;
  trace.p0 = p0;
  trace.mean_shift.assign(taus.size(), 0.0);
  trace.variance.assign(taus.size(), 0.0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < n_draws; ++k) {
    const double d = jitter_sigma_rad == 0.0 ? 0.0 : jitter_sigma_rad * gauss(rng);
    LightState jittered = state;
    jittered.phi = state.phi + d;
    jittered.theta = state.theta + 2.0 * d;
    for (size_t i = 0; i < taus.size(); ++i) {
      trace.mean_shift[i] += (oracle_mean(jittered, env, taus[i], p0) - p0) / n_draws;
      trace.variance[i] += oracle_variance(jittered, env, taus[i], sigma0_sq) / n_draws;
    }
  }
  return trace;
}

}  // namespace qstreak
