#pragma once

#include "qstreak/ensemble.hpp"
#include "qstreak/envelope.hpp"

namespace qstreak {

// Fit of <dp(tau)> = -amplitude f(tau) cos(w tau - phi_streak). Linear in
// (amplitude cos phi, amplitude sin phi); amplitude >= 0, phase in (-pi, pi].
struct MeanFit {
  double amplitude = 0.0;    // E_c / omega
  double phi_streak = 0.0;
  double residual_rms = 0.0;
  double amplitude_var = 0.0;  // parameter covariance estimates
  double phase_var = 0.0;
  int n_used = 0;
};

// Fit of <Dp^2(tau)> = amplitude/2 f^2(tau) [1 - cos(2 w tau - theta_streak)]
// + sigma0_sq. Linear init plus damped Gauss-Newton; amplitude >= 0,
// theta in [0, 2 pi).
struct VarianceFit {
  double amplitude = 0.0;    // E_s^2 / omega^2
  double theta_streak = 0.0;
  double sigma0_sq = 0.0;
  double residual_rms = 0.0;
  double amplitude_var = 0.0;
  double phase_var = 0.0;
  double sigma0_var = 0.0;
  bool sigma0_nonphysical = false;  // fit kept, flagged when sigma0_sq < 0
  int n_used = 0;
};

struct FitOptions {
  double envelope_floor = 0.1;  // delays with f(tau) <= this are excluded
  int max_iterations = 200;
};

MeanFit fit_mean(const MomentTrace& trace, double omega, const Envelope& env,
                 const FitOptions& opts = {});
VarianceFit fit_variance(const MomentTrace& trace, double omega, const Envelope& env,
                         const FitOptions& opts = {});

// delta = phi_streak(reference) - known_phi, wrapped to (-pi, pi]
double calibrate_delta(const MomentTrace& reference, double known_phi, double omega,
                       const Envelope& env, const FitOptions& opts = {});

struct RetrievalReport {
  double e_coh = 0.0;          // omega * mean amplitude
  double e_sq = 0.0;           // omega * sqrt(variance amplitude)
  double phi_streak = 0.0;
  double theta_streak = 0.0;
  double delta = 0.0;
  double phi = 0.0;            // phi_streak - delta
  double theta = 0.0;          // (theta_streak - 2 delta) mod 2 pi
  double sigma0_sq = 0.0;
  double residual_mean = 0.0;
  double residual_var = 0.0;
  MeanFit mean_fit;
  VarianceFit variance_fit;
};

RetrievalReport retrieve(const MomentTrace& trace, double delta, double omega,
                         const Envelope& env, const FitOptions& opts = {});

}  // namespace qstreak
