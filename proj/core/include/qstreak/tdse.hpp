#pragma once

#include <memory>
#include <vector>

#include "qstreak/fields.hpp"
#include "qstreak/grid.hpp"
#include "qstreak/quadrature.hpp"
#include "qstreak/wavefunction.hpp"

namespace qstreak {

struct GroundState {
  Wavefunction psi;
  double energy = 0.0;
  int iterations = 0;
};

struct GroundStateOptions {
  double imag_dt = 0.1;
  int max_iterations = 200000;
  double energy_drift_tol = 1e-12;  // per-step drift threshold
  int check_interval = 16;
};

// Lowest eigenstate of -1/2 d^2/dx^2 + V_C by imaginary-time split-step
// propagation with per-step renormalization. Throws NumericalError on
// non-convergence.
GroundState ground_state(const SpatialGrid& grid, const GroundStateOptions& opts = {});

// Total drive A(t) = A_cl(t; member) + A_XUV(t - tau). Either part optional.
struct DriveFields {
  const IrRealization* ir = nullptr;
  const XuvPulse* xuv = nullptr;
  double tau = 0.0;

  double total(double t) const {
    double a = 0.0;
    if (ir) a += a_cl_beta(*ir, t);
    if (xuv) a += a_xuv(*xuv, t - tau);
    return a;
  }
};

struct PropagationStats {
  double initial_norm = 0.0;
  double final_norm = 0.0;
  double max_norm_increase = 0.0;  // largest positive norm step (roundoff scale)
  long steps = 0;
};

struct MomentumSpectrum {
  std::vector<double> p;
  std::vector<double> density;  // probability per unit momentum

  double yield() const;     // integral over the window
  double mean() const;      // window-normalized first moment
  double variance() const;  // window-normalized central second moment
};

// Velocity-gauge split-step propagator bound to one grid. Owns FFT plans and
// phase tables; one instance per thread, many instances may run concurrently.
class Propagator {
 public:
  explicit Propagator(const SpatialGrid& grid);
  ~Propagator();
  Propagator(const Propagator&) = delete;
  Propagator& operator=(const Propagator&) = delete;

  const SpatialGrid& grid() const;

  // Steps from t_start by round((t_end - t_start)/dt) steps of exactly dt.
  // Uses an internal scratch buffer: one instance must not be shared between
  // threads, but independent instances run concurrently.
  void propagate(Wavefunction& psi, const DriveFields& fields, double t_start,
                 double t_end, PropagationStats* stats = nullptr);

  // Lower-level entry on a fixed step lattice: step s runs over
  // [t_origin + (first_step + s) dt, +dt]. Splitting a propagation at any
  // lattice point reproduces the single-call arithmetic exactly.
  void propagate_steps(Wavefunction& psi, const DriveFields& fields, double t_origin,
                       long first_step, long n_steps, PropagationStats* stats = nullptr);

  // Masks out |x| < mask_radius, Fourier-transforms the remainder and returns
  // |psi(p)|^2 on the momentum bins inside [p_lo, p_hi].
  MomentumSpectrum extract_spectrum(const Wavefunction& psi, double p_lo,
                                    double p_hi);

  // |psi|^2 mass inside the absorbing zone (diagnostic for invalid runs)
  double absorber_zone_mass(const Wavefunction& psi) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SingleRunResult {
  MomentumSpectrum spectrum;
  PropagationStats stats;
  double absorbed_norm = 0.0;
  double absorber_mass = 0.0;
  bool valid = true;
};

struct SingleRunOptions {
  double drift_time = 150.0;        // extraction at tau + drift_time
  double window_halfwidth = 0.35;   // momentum window around p0
  double invalid_fraction = 0.01;   // absorber contamination threshold vs yield
};

double nominal_p0(double xuv_photon_energy, double ip);

// Step-lattice schedule of one streaking run: propagation starts at the IR
// turn-on and ends at tau + drift_time; the XUV is guaranteed zero before
// branch_step, so a scan may share the IR-only segment across delays.
struct RunSchedule {
  double t_origin = 0.0;
  long branch_step = 0;
  long total_steps = 0;
};

RunSchedule make_run_schedule(const SpatialGrid& grid, const Envelope& ir_env,
                              const XuvPulse& xuv, double tau, double drift_time);

// Ground state -> propagation through the pulses from the IR turn-on to
// tau + drift_time -> spectrum extraction around p0.
SingleRunResult single_run(Propagator& prop, const GroundState& ground,
                           const IrRealization& ir, const XuvPulse& xuv, double tau,
                           const SingleRunOptions& opts);

}  // namespace qstreak
