#include "qstreak/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>

#include "qstreak/errors.hpp"

namespace qstreak {

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

IrRealization realization_for_node(const LightState& state, const Envelope& env,
                                   const BetaNode& node) {
  if (node.mode == QuadratureMode::exact_2d) {
    return realization_from_beta(state, env, node.point);
  }
  return realization_from_amplitude(state, env, node.s);
}

struct MemberOutcome {
  std::vector<MomentumSpectrum> spectra;  // one per delay, original order
  std::vector<std::string> failures;
  double max_norm_increase = 0.0;
  std::exception_ptr error;
};

}  // namespace

std::vector<double> uniform_delays(double tau_min, double tau_max, int count) {
  if (count < 1 || !(tau_max > tau_min)) {
    throw ValidationError("uniform_delays: need count >= 1 and tau_max > tau_min");
  }
  std::vector<double> taus(count);
  const double step = (tau_max - tau_min) / count;  // half-open grid
  for (int i = 0; i < count; ++i) taus[i] = tau_min + i * step;
  return taus;
}

StreakSpectrogram run_scan(const SpatialGrid& grid, const LightState& state,
                           const Envelope& ir_env, const XuvPulse& xuv,
                           const std::vector<BetaNode>& nodes, const ScanConfig& scan) {
  validate(grid);
  validate(state);
  if (nodes.empty()) throw ValidationError("run_scan: empty node list");
  if (scan.delays.empty()) throw ValidationError("run_scan: empty delay grid");
  if (grid.dt > 0.2 / xuv.photon_energy) {
    throw ValidationError("run_scan: dt too coarse for the XUV carrier");
  }

  const GroundState ground = ground_state(grid);
  const double p0 = nominal_p0(xuv.photon_energy, -ground.energy);
  const double p_lo = p0 - scan.window_halfwidth;
  const double p_hi = p0 + scan.window_halfwidth;

  // schedules are delay-only; validate all of them up front
  const size_t n_tau = scan.delays.size();
  std::vector<RunSchedule> scheds(n_tau);
  for (size_t j = 0; j < n_tau; ++j) {
    scheds[j] = make_run_schedule(grid, ir_env, xuv, scan.delays[j], scan.drift_time);
  }
  // process delays in branch-step order so the shared IR trunk only advances
  std::vector<size_t> order(n_tau);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scheds[a].branch_step < scheds[b].branch_step;
  });

  std::vector<MemberOutcome> outcomes(nodes.size());
  std::atomic<size_t> next{0};

  auto run_member = [&](Propagator& prop, size_t k) {
    MemberOutcome out;
    out.spectra.resize(n_tau);
    const IrRealization ir = realization_for_node(state, ir_env, nodes[k]);
    DriveFields trunk_fields;
    trunk_fields.ir = &ir;

    Wavefunction trunk = ground.psi;
    long trunk_step = 0;
    const double t_origin = scheds[0].t_origin;
    for (size_t jj = 0; jj < n_tau; ++jj) {
      const size_t j = order[jj];
      const RunSchedule& sc = scheds[j];
      if (sc.branch_step > trunk_step) {
        PropagationStats st;
        prop.propagate_steps(trunk, trunk_fields, t_origin, trunk_step,
                             sc.branch_step - trunk_step, &st);
        out.max_norm_increase = std::max(out.max_norm_increase, st.max_norm_increase);
        trunk_step = sc.branch_step;
      }
      Wavefunction psi = trunk;
      DriveFields fields;
      fields.ir = &ir;
      fields.xuv = &xuv;
      fields.tau = scan.delays[j];
      PropagationStats st;
      prop.propagate_steps(psi, fields, t_origin, sc.branch_step,
                           sc.total_steps - sc.branch_step, &st);
      out.max_norm_increase = std::max(out.max_norm_increase, st.max_norm_increase);

      MomentumSpectrum spec = prop.extract_spectrum(psi, p_lo, p_hi);
      const double yield = spec.yield();
      const double absorbed = std::max(0.0, 1.0 - st.final_norm);
      const double abs_mass = prop.absorber_zone_mass(psi);
      if (!(yield > 0.0) || absorbed > scan.invalid_fraction * yield ||
          abs_mass > scan.invalid_fraction * yield) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "member %zu, tau = %.6g: yield %.3e, absorbed %.3e, absorber mass %.3e",
                      k, scan.delays[j], yield, absorbed, abs_mass);
        out.failures.emplace_back(buf);
      }
      out.spectra[j] = std::move(spec);
    }
    return out;
  };

  auto worker = [&]() {
    Propagator prop(grid);
    for (;;) {
      const size_t k = next.fetch_add(1);
      if (k >= nodes.size()) break;
      try {
        outcomes[k] = run_member(prop, k);
      } catch (...) {
        outcomes[k].error = std::current_exception();
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(scan.threads, static_cast<int>(nodes.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  std::string failures;
  double max_norm_increase = 0.0;
  for (const MemberOutcome& out : outcomes) {
    if (out.error) std::rethrow_exception(out.error);
    for (const std::string& f : out.failures) {
      if (!failures.empty()) failures += "; ";
      failures += f;
    }
    max_norm_increase = std::max(max_norm_increase, out.max_norm_increase);
  }
  if (!failures.empty()) {
    throw NumericalError("run_scan: invalid runs: " + failures);
  }

  StreakSpectrogram spec;
  spec.tau = scan.delays;
  spec.p = outcomes.front().spectra.front().p;
  spec.p0 = p0;
  spec.values.assign(n_tau * spec.p.size(), 0.0);
  // fixed reduction order: member index, then delay
  for (size_t k = 0; k < nodes.size(); ++k) {
    const double w = nodes[k].weight;
    for (size_t j = 0; j < n_tau; ++j) {
      const MomentumSpectrum& s = outcomes[k].spectra[j];
      double* row = spec.values.data() + j * spec.p.size();
      for (size_t i = 0; i < spec.p.size(); ++i) row[i] += w * s.density[i];
    }
  }

  spec.meta["scan.p0"] = fmt_g(p0);
  spec.meta["scan.ground_energy"] = fmt_g(ground.energy);
  spec.meta["scan.nodes"] = std::to_string(nodes.size());
  spec.meta["scan.delays"] = std::to_string(n_tau);
  spec.meta["scan.drift_time"] = fmt_g(scan.drift_time);
  spec.meta["scan.window_halfwidth"] = fmt_g(scan.window_halfwidth);
  spec.meta["scan.max_norm_increase"] = fmt_g(max_norm_increase);
  spec.meta["light.omega"] = fmt_g(state.omega);
  return spec;
}

MomentTrace accumulate_moments(const StreakSpectrogram& spec, double p_lo, double p_hi) {
  if (spec.p.size() < 2 || spec.tau.empty()) {
    throw ValidationError("accumulate_moments: empty spectrogram");
  }
  size_t i_lo = 0, i_hi = spec.p.size();
  while (i_lo < spec.p.size() && spec.p[i_lo] < p_lo) ++i_lo;
  while (i_hi > 0 && spec.p[i_hi - 1] > p_hi) --i_hi;
  if (i_hi <= i_lo + 1) {
    throw ValidationError("accumulate_moments: window contains no momentum bins");
  }

  MomentTrace trace;
  trace.tau = spec.tau;
  trace.p0 = spec.p0;
  trace.meta = spec.meta;
  trace.mean_shift.resize(spec.tau.size());
  trace.variance.resize(spec.tau.size());
  for (size_t j = 0; j < spec.tau.size(); ++j) {
    const double* row = spec.values.data() + j * spec.p.size();
    double sy = 0.0, sp = 0.0;
    for (size_t i = i_lo; i < i_hi; ++i) {
      sy += row[i];
      sp += spec.p[i] * row[i];
    }
    if (!(sy > 0.0)) {
      throw NumericalError("accumulate_moments: zero yield at tau = " +
                           std::to_string(spec.tau[j]));
    }
    const double m = sp / sy;
    double s2 = 0.0;
    for (size_t i = i_lo; i < i_hi; ++i) {
      s2 += (spec.p[i] - m) * (spec.p[i] - m) * row[i];
    }
    trace.mean_shift[j] = m - spec.p0;
    trace.variance[j] = s2 / sy;
  }
  return trace;
}

}  // namespace qstreak
