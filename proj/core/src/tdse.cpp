#include "qstreak/tdse.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include "qstreak/errors.hpp"

namespace qstreak {

using cplx = std::complex<double>;

double SpatialGrid::potential(double xx) const {
  return -1.0 / std::sqrt(xx * xx + softcore_a2);
}

void validate(const SpatialGrid& grid) {
  if (grid.n_points < 2 || (grid.n_points & (grid.n_points - 1)) != 0) {
    throw ValidationError("grid: n_points must be a power of two >= 2");
  }
  if (!(grid.x_max > grid.x_min)) throw ValidationError("grid: x_max must exceed x_min");
  if (!(grid.dt > 0.0)) throw ValidationError("grid: dt must be positive");
  if (grid.absorber_width < 0.0 || grid.absorber_width >= grid.length() / 4.0) {
    throw ValidationError("grid: absorber_width must lie in [0, L/4)");
  }
  if (!(grid.softcore_a2 > 0.0)) throw ValidationError("grid: softcore_a2 must be positive");
  if (grid.mask_radius < 0.0 || grid.mask_ramp < 0.0) {
    throw ValidationError("grid: mask parameters must be >= 0");
  }
}

double Wavefunction::norm(const SpatialGrid& grid) const {
  double s = 0.0;
  for (const cplx& a : amp) s += std::norm(a);
  return s * grid.dx();
}

void Wavefunction::normalize(const SpatialGrid& grid) {
  const double n = norm(grid);
  if (!(n > 0.0)) throw NumericalError("cannot normalize a zero wavefunction");
  const double inv = 1.0 / std::sqrt(n);
  for (cplx& a : amp) a *= inv;
}

void Wavefunction::save_binary(const std::string& path, const SpatialGrid& grid) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  const std::int64_t n = static_cast<std::int64_t>(amp.size());
  const double xmin = grid.x_min, dx = grid.dx();
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&xmin), sizeof(xmin));
  out.write(reinterpret_cast<const char*>(&dx), sizeof(dx));
  out.write(reinterpret_cast<const char*>(amp.data()),
            static_cast<std::streamsize>(amp.size() * sizeof(cplx)));
}

Wavefunction Wavefunction::load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::int64_t n = 0;
  double xmin = 0.0, dx = 0.0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&xmin), sizeof(xmin));
  in.read(reinterpret_cast<char*>(&dx), sizeof(dx));
  if (!in || n <= 0) throw ValidationError("corrupt wavefunction dump: " + path);
  Wavefunction psi;
  psi.amp.resize(static_cast<size_t>(n));
  in.read(reinterpret_cast<char*>(psi.amp.data()),
          static_cast<std::streamsize>(psi.amp.size() * sizeof(cplx)));
  if (!in) throw ValidationError("corrupt wavefunction dump: " + path);
  return psi;
}

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Aligned FFT workspace with forward/backward in-place plans.
struct FftWorkspace {
  int n = 0;
  cplx* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit FftWorkspace(int n_points) : n(n_points) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n));
    fwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf),
                           reinterpret_cast<fftw_complex*>(buf), FFTW_FORWARD,
                           FFTW_MEASURE);
    bwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf),
                           reinterpret_cast<fftw_complex*>(buf), FFTW_BACKWARD,
                           FFTW_MEASURE);
  }
  ~FftWorkspace() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
  FftWorkspace(const FftWorkspace&) = delete;
  FftWorkspace& operator=(const FftWorkspace&) = delete;

  void forward() { fftw_execute(fwd); }
  void backward() { fftw_execute(bwd); }
};

double absorber_mask_value(const SpatialGrid& grid, double x) {
  if (grid.absorber_width <= 0.0) return 1.0;
  const double depth_lo = grid.x_min + grid.absorber_width - x;
  const double depth_hi = x - (grid.x_max - grid.absorber_width);
  const double depth = std::max(depth_lo, depth_hi);
  if (depth <= 0.0) return 1.0;
  const double s = std::min(depth / grid.absorber_width, 1.0);
  return std::pow(std::cos(0.5 * units::pi * s), 0.125);
}

double extraction_mask_value(const SpatialGrid& grid, double x) {
  const double ax = std::abs(x);
  if (ax <= grid.mask_radius) return 0.0;
  if (grid.mask_ramp <= 0.0 || ax >= grid.mask_radius + grid.mask_ramp) return 1.0;
  const double s = (ax - grid.mask_radius) / grid.mask_ramp;
  const double w = std::sin(0.5 * units::pi * s);
  return w * w;
}

}  // namespace

struct Propagator::Impl {
  SpatialGrid grid;
  FftWorkspace fft;
  std::vector<cplx> kin_base;  // exp(-i (dt/4) p^2) / n, one inverse-FFT scale each
  std::vector<cplx> vfac;      // exp(-i dt V(x)) * absorber_mask(x)
  std::vector<double> ext_mask;
  int abs_zone_lo = 0;  // first/last interior index outside the absorbing zone
  int abs_zone_hi = 0;

  explicit Impl(const SpatialGrid& g) : grid(g), fft(g.n_points) {
    const int n = grid.n_points;
    kin_base.resize(n);
    vfac.resize(n);
    ext_mask.resize(n);
    const double c = 0.25 * grid.dt;
    for (int k = 0; k < n; ++k) {
      const double p = grid.p(k);
      kin_base[k] = std::polar(1.0 / n, -c * p * p);
    }
    for (int i = 0; i < n; ++i) {
      const double x = grid.x(i);
      vfac[i] = std::polar(1.0, -grid.dt * grid.potential(x)) *
                absorber_mask_value(grid, x);
      ext_mask[i] = extraction_mask_value(grid, x);
    }
    abs_zone_lo = 0;
    abs_zone_hi = n - 1;
    if (grid.absorber_width > 0.0) {
      while (abs_zone_lo < n && grid.x(abs_zone_lo) < grid.x_min + grid.absorber_width)
        ++abs_zone_lo;
      while (abs_zone_hi >= 0 && grid.x(abs_zone_hi) > grid.x_max - grid.absorber_width)
        --abs_zone_hi;
    }
  }

  // psi_k *= exp(-i (dt/4) (p + a)^2) / n, via the factorization
  // exp(-i c p^2) exp(-i chi m) exp(-i c a^2) with m the integer FFT index.
  void kinetic_half(double a) {
    const int n = grid.n_points;
    const double c = 0.25 * grid.dt;
    const double chi = -2.0 * c * a * grid.dp();
    const cplx global = std::polar(1.0, -c * a * a);
    const cplx u = std::polar(1.0, chi);
    cplx* b = fft.buf;
    cplx z = global;
    for (int k = 0; k < n / 2; ++k) {
      if ((k & 63) == 0) z = global * std::polar(1.0, chi * k);
      b[k] *= kin_base[k] * z;
      z *= u;
    }
    z = global * std::polar(1.0, chi * (-n / 2));
    for (int k = n / 2; k < n; ++k) {
      const int m = k - n;
      if ((m & 63) == 0) z = global * std::polar(1.0, chi * m);
      b[k] *= kin_base[k] * z;
      z *= u;
    }
  }

  double buffer_norm() const {
    double s = 0.0;
    for (int i = 0; i < grid.n_points; ++i) s += std::norm(fft.buf[i]);
    return s * grid.dx();
  }
};

Propagator::Propagator(const SpatialGrid& grid) {
  validate(grid);
  impl_ = std::make_unique<Impl>(grid);
}

Propagator::~Propagator() = default;

const SpatialGrid& Propagator::grid() const { return impl_->grid; }

void Propagator::propagate(Wavefunction& psi, const DriveFields& fields,
                           double t_start, double t_end, PropagationStats* stats) {
  const double span = t_end - t_start;
  if (span < 0.0) throw ValidationError("propagate: t_end before t_start");
  propagate_steps(psi, fields, t_start, 0, std::lround(span / impl_->grid.dt), stats);
}

void Propagator::propagate_steps(Wavefunction& psi, const DriveFields& fields,
                                 double t_origin, long first_step, long n_steps,
                                 PropagationStats* stats) {
  Impl& im = *impl_;
  const int n = im.grid.n_points;
  if (static_cast<int>(psi.amp.size()) != n) {
    throw ValidationError("propagate: wavefunction size does not match grid");
  }
  if (n_steps < 0) throw ValidationError("propagate: negative step count");
  const double dt = im.grid.dt;

  std::copy(psi.amp.begin(), psi.amp.end(), im.fft.buf);

  PropagationStats st;
  st.initial_norm = im.buffer_norm();
  st.steps = n_steps;
  double last_norm = st.initial_norm;

  for (long s = 0; s < n_steps; ++s) {
    const double t = t_origin + (first_step + s) * dt;
    im.fft.forward();
    im.kinetic_half(fields.total(t + 0.25 * dt));
    im.fft.backward();
    for (int i = 0; i < n; ++i) im.fft.buf[i] *= im.vfac[i];
    im.fft.forward();
    im.kinetic_half(fields.total(t + 0.75 * dt));
    im.fft.backward();

    if ((s & 255) == 255 || s + 1 == n_steps) {
      const double nn = im.buffer_norm();
      if (!std::isfinite(nn)) {
        throw NumericalError("propagate: NaN detected at t = " +
                             std::to_string(t + dt));
      }
      if (nn > last_norm) st.max_norm_increase = std::max(st.max_norm_increase, nn - last_norm);
      last_norm = nn;
    }
  }

  st.final_norm = last_norm;
  std::copy(im.fft.buf, im.fft.buf + n, psi.amp.begin());
  if (stats) *stats = st;
}

MomentumSpectrum Propagator::extract_spectrum(const Wavefunction& psi, double p_lo,
                                              double p_hi) {
  Impl& im = *impl_;
  const SpatialGrid& g = im.grid;
  const int n = g.n_points;
  if (static_cast<int>(psi.amp.size()) != n) {
    throw ValidationError("extract_spectrum: wavefunction size does not match grid");
  }
  const double dp = g.dp();
  const double p_max = (n / 2 - 1) * dp;
  if (!(p_lo < p_hi) || p_lo < 0.0 || p_hi > p_max) {
    throw ValidationError("extract_spectrum: momentum window out of range");
  }
  const int k_lo = static_cast<int>(std::ceil(p_lo / dp));
  const int k_hi = static_cast<int>(std::floor(p_hi / dp));
  if (k_hi < k_lo) throw ValidationError("extract_spectrum: empty momentum window");

  for (int i = 0; i < n; ++i) im.fft.buf[i] = psi.amp[i] * im.ext_mask[i];
  im.fft.forward();

  // psi~(p) = dx/sqrt(2 pi) sum psi(x) e^{-ipx}; |psi~|^2 integrates to the
  // masked norm over dp (Parseval)
  const double scale = g.dx() / std::sqrt(2.0 * units::pi);
  MomentumSpectrum spec;
  spec.p.resize(k_hi - k_lo + 1);
  spec.density.resize(k_hi - k_lo + 1);
  for (int k = k_lo; k <= k_hi; ++k) {
    spec.p[k - k_lo] = k * dp;
    spec.density[k - k_lo] = std::norm(scale * im.fft.buf[k]);
  }
  return spec;
}

double Propagator::absorber_zone_mass(const Wavefunction& psi) const {
  const Impl& im = *impl_;
  double s = 0.0;
  for (int i = 0; i < im.abs_zone_lo; ++i) s += std::norm(psi.amp[i]);
  for (int i = im.abs_zone_hi + 1; i < im.grid.n_points; ++i) s += std::norm(psi.amp[i]);
  return s * im.grid.dx();
}

double MomentumSpectrum::yield() const {
  if (p.size() < 2) return 0.0;
  const double dp = p[1] - p[0];
  double s = 0.0;
  for (double d : density) s += d;
  return s * dp;
}

double MomentumSpectrum::mean() const {
  double sy = 0.0, sp = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    sy += density[i];
    sp += p[i] * density[i];
  }
  if (!(sy > 0.0)) throw NumericalError("momentum spectrum has zero yield in window");
  return sp / sy;
}

double MomentumSpectrum::variance() const {
  const double m = mean();
  double sy = 0.0, s2 = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    sy += density[i];
    s2 += (p[i] - m) * (p[i] - m) * density[i];
  }
  return s2 / sy;
}

GroundState ground_state(const SpatialGrid& grid, const GroundStateOptions& opts) {
  validate(grid);
  const int n = grid.n_points;
  FftWorkspace fft(n);

  std::vector<double> kin_half(n), kin_p2(n), vfac(n), pot(n);
  const double dti = opts.imag_dt;
  for (int k = 0; k < n; ++k) {
    const double p = grid.p(k);
    kin_half[k] = std::exp(-0.25 * dti * p * p) / n;
    kin_p2[k] = 0.5 * p * p;
  }
  for (int i = 0; i < n; ++i) {
    pot[i] = grid.potential(grid.x(i));
    vfac[i] = std::exp(-dti * pot[i]);
  }

  // even initial guess; the ground state of the symmetric well is even
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    fft.buf[i] = std::exp(-0.25 * x * x);
  }

  const double dx = grid.dx();
  const double dp = grid.dp();
  auto renormalize = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::norm(fft.buf[i]);
    s = 1.0 / std::sqrt(s * dx);
    for (int i = 0; i < n; ++i) fft.buf[i] *= s;
  };
  renormalize();

  std::vector<cplx> saved(n);
  auto energy_of_current = [&]() {
    std::copy(fft.buf, fft.buf + n, saved.begin());
    double ev = 0.0;
    for (int i = 0; i < n; ++i) ev += pot[i] * std::norm(fft.buf[i]);
    ev *= dx;
    fft.forward();
    const double scale = dx / std::sqrt(2.0 * units::pi);
    double ek = 0.0;
    for (int k = 0; k < n; ++k) ek += kin_p2[k] * std::norm(scale * fft.buf[k]);
    ek *= dp;
    std::copy(saved.begin(), saved.end(), fft.buf);
    return ek + ev;
  };

  double e_prev = energy_of_current();
  int iter = 0;
  bool converged = false;
  while (iter < opts.max_iterations) {
    for (int step = 0; step < opts.check_interval; ++step) {
      fft.forward();
      for (int k = 0; k < n; ++k) fft.buf[k] *= kin_half[k];
      fft.backward();
      for (int i = 0; i < n; ++i) fft.buf[i] *= vfac[i];
      fft.forward();
      for (int k = 0; k < n; ++k) fft.buf[k] *= kin_half[k];
      fft.backward();
      renormalize();
      ++iter;
    }
    const double e_now = energy_of_current();
    if (!std::isfinite(e_now)) throw NumericalError("ground_state: NaN in imaginary time");
    const double drift = std::abs(e_now - e_prev) / opts.check_interval;
    e_prev = e_now;
    if (drift < opts.energy_drift_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NumericalError("ground_state: not converged after " +
                         std::to_string(iter) + " iterations");
  }

  GroundState gs;
  gs.psi.amp.assign(fft.buf, fft.buf + n);
  gs.psi.normalize(grid);
  gs.energy = e_prev;
  gs.iterations = iter;
  return gs;
}

double nominal_p0(double xuv_photon_energy, double ip) {
  const double ek = xuv_photon_energy - ip;
  if (!(ek > 0.0)) {
    throw ValidationError("XUV photon energy must exceed the ionization potential");
  }
  return std::sqrt(2.0 * ek);
}

RunSchedule make_run_schedule(const SpatialGrid& grid, const Envelope& ir_env,
                              const XuvPulse& xuv, double tau, double drift_time) {
  RunSchedule sched;
  sched.t_origin = ir_env.support_min();
  const double xuv_start = tau + xuv.envelope.support_min();
  if (xuv_start < sched.t_origin) {
    throw ValidationError("run schedule: XUV pulse begins before the IR turn-on");
  }
  if (tau + drift_time <= tau + xuv.envelope.support_max()) {
    throw ValidationError("run schedule: drift_time too short to clear the XUV pulse");
  }
  sched.branch_step =
      std::max(0L, static_cast<long>(std::floor((xuv_start - sched.t_origin) / grid.dt)));
  sched.total_steps = std::lround((tau + drift_time - sched.t_origin) / grid.dt);
  if (sched.total_steps < sched.branch_step) sched.branch_step = sched.total_steps;
  return sched;
}

SingleRunResult single_run(Propagator& prop, const GroundState& ground,
                           const IrRealization& ir, const XuvPulse& xuv, double tau,
                           const SingleRunOptions& opts) {
  const SpatialGrid& grid = prop.grid();
  if (grid.dt > 0.2 / xuv.photon_energy) {
    throw ValidationError("single_run: dt too coarse for the XUV carrier");
  }
  const RunSchedule sched = make_run_schedule(grid, ir.envelope, xuv, tau, opts.drift_time);
  const double p0 = nominal_p0(xuv.photon_energy, -ground.energy);

  SingleRunResult res;
  Wavefunction psi = ground.psi;
  DriveFields fields;
  fields.ir = &ir;
  fields.xuv = &xuv;
  fields.tau = tau;
  prop.propagate_steps(psi, fields, sched.t_origin, 0, sched.total_steps, &res.stats);

  res.spectrum = prop.extract_spectrum(psi, p0 - opts.window_halfwidth,
                                       p0 + opts.window_halfwidth);
  res.absorbed_norm = std::max(0.0, res.stats.initial_norm - res.stats.final_norm);
  res.absorber_mass = prop.absorber_zone_mass(psi);
  const double yield = res.spectrum.yield();
  res.valid = yield > 0.0 &&
              res.absorbed_norm <= opts.invalid_fraction * yield &&
              res.absorber_mass <= opts.invalid_fraction * yield;
  return res;
}

}  // namespace qstreak
