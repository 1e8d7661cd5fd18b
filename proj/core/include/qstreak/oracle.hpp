#pragma once

#include <cstdint>
#include <vector>

#include "qstreak/ensemble.hpp"
#include "qstreak/fields.hpp"
#include "qstreak/light_state.hpp"

namespace qstreak {

// Coulomb-free streaking model: the asymptotic momentum is
// p0 - A_cl(tau) - N(tau), so the mean traces the coherent field and the
// variance traces the equal-time noise kernel. No scattering phase here.

struct OracleMoments {
  double tau = 0.0;
  double mean_shift = 0.0;  // <p> - p0
  double variance = 0.0;
  double mean_se = 0.0;     // standard errors (Monte Carlo only)
  double var_se = 0.0;
};

double asymptotic_momentum(double p0, double a_cl_value, double noise_value);

// p0 - A_cl(tau)
double oracle_mean(const LightState& state, const Envelope& env, double tau, double p0);

// nu(tau, tau) + sigma0^2
double oracle_variance(const LightState& state, const Envelope& env, double tau,
                       double sigma0_sq);

// Sample-based check of the closed forms: draws the member distribution
// (beta in exact mode, the 1D amplitude in macroscopic mode) and maps it
// through the asymptotic momentum. Reproducible for a fixed seed.
OracleMoments monte_carlo_moments(const LightState& state, const Envelope& env,
                                  double tau, long n_samples, std::uint64_t seed,
                                  double p0 = 0.0);

MomentTrace oracle_trace(const LightState& state, const Envelope& env,
                         const std::vector<double>& taus, double sigma0_sq, double p0);

// (relative intensity, weight) pairs, weights summing to 1
struct FocalProfile {
  std::vector<double> rel_intensity;
  std::vector<double> weight;
};

// Gaussian-beam cross section cut into n annuli of equal radial step out to
// max_radius beam waists; each annulus weighted by its ionization share
// (local beam intensity times area), then normalized.
FocalProfile gaussian_beam_profile(int n_annuli = 32, double max_radius = 2.0);

// Weight-averages the closed-form moment traces over intensity scalings;
// E_c and E_s scale with sqrt(relative intensity).
MomentTrace focal_average_moments(const LightState& state, const Envelope& env,
                                  const std::vector<double>& taus, double sigma0_sq,
                                  double p0, const FocalProfile& profile);

// Averages the closed-form moments over a Gaussian carrier-envelope-phase
// jitter: phi -> phi + d, theta -> theta + 2d with d ~ N(0, jitter_sigma^2).
MomentTrace cep_jitter_moments(const LightState& state, const Envelope& env,
                               const std::vector<double>& taus, double sigma0_sq,
                               double p0, double jitter_sigma_rad, int n_draws,
                               std::uint64_t seed);

}  // namespace qstreak
