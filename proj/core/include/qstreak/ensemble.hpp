#pragma once

#include <map>
#include <string>
#include <vector>

#include "qstreak/fields.hpp"
#include "qstreak/quadrature.hpp"
#include "qstreak/tdse.hpp"

namespace qstreak {

// Delay-resolved photoelectron probability P(p, tau), the weighted sum of the
// ensemble members' spectra, plus the configuration snapshot it came from.
struct StreakSpectrogram {
  std::vector<double> tau;            // a.u.
  std::vector<double> p;              // a.u.
  std::vector<double> values;         // row-major [tau][p], >= 0
  double p0 = 0.0;
  std::map<std::string, std::string> meta;

  double at(size_t i_tau, size_t i_p) const { return values[i_tau * p.size() + i_p]; }
};

struct MomentTrace {
  std::vector<double> tau;
  std::vector<double> mean_shift;  // <p> - p0
  std::vector<double> variance;    // <p^2> - <p>^2
  double p0 = 0.0;
  std::map<std::string, std::string> meta;
};

struct ScanConfig {
  std::vector<double> delays;      // a.u.
  double drift_time = 150.0;       // extraction at tau + drift_time
  double window_halfwidth = 0.6;   // momentum window around p0
  double invalid_fraction = 0.01;
  int threads = 1;                 // worker threads across ensemble members
};

std::vector<double> uniform_delays(double tau_min, double tau_max, int count);

// Runs the (member x delay) scan and accumulates P(p, tau) = sum_k w_k P_k.
// Members are distributed over threads; within one member the shared IR-only
// segment is propagated once and branched at each delay, which reproduces the
// per-run composition exactly (the XUV vanishes outside its support).
// Throws NumericalError listing the offending (member, tau) if any run is
// invalid; the reduction order is fixed by member index.
StreakSpectrogram run_scan(const SpatialGrid& grid, const LightState& state,
                           const Envelope& ir_env, const XuvPulse& xuv,
                           const std::vector<BetaNode>& nodes, const ScanConfig& scan);

// Per delay: normalize P(., tau) on [p_lo, p_hi] and form the first two
// central moments relative to the spectrogram's p0.
MomentTrace accumulate_moments(const StreakSpectrogram& spec, double p_lo, double p_hi);

}  // namespace qstreak
