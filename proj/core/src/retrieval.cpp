#include "qstreak/retrieval.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "qstreak/errors.hpp"
#include "qstreak/units.hpp"

namespace qstreak {

namespace {

constexpr double two_pi = 2.0 * units::pi;

double wrap_pi(double a) {
  a = std::fmod(a + units::pi, two_pi);
  if (a < 0.0) a += two_pi;
  return a - units::pi;
}

double wrap_two_pi(double a) {
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

// Gaussian elimination with partial pivoting for the small normal systems.
template <int N>
std::array<double, N> solve(std::array<std::array<double, N>, N> a,
                            std::array<double, N> b) {
  for (int col = 0; col < N; ++col) {
    int piv = col;
    for (int row = col + 1; row < N; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
    }
    if (std::abs(a[piv][col]) < 1e-300) {
      throw NumericalError("fit: rank-deficient normal equations");
    }
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (int row = col + 1; row < N; ++row) {
      const double f = a[row][col] / a[col][col];
      for (int k = col; k < N; ++k) a[row][k] -= f * a[col][k];
      b[row] -= f * b[col];
    }
  }
  std::array<double, N> x{};
  for (int row = N - 1; row >= 0; --row) {
    double s = b[row];
    for (int k = row + 1; k < N; ++k) s -= a[row][k] * x[k];
    x[row] = s / a[row][row];
  }
  return x;
}

struct FitData {
  std::vector<double> tau, f, y;
};

FitData select_points(const MomentTrace& trace, const Envelope& env, bool use_variance,
                      double floor) {
  if (trace.tau.size() != trace.mean_shift.size() ||
      trace.tau.size() != trace.variance.size()) {
    throw ValidationError("fit: malformed moment trace");
  }
  FitData d;
  for (size_t i = 0; i < trace.tau.size(); ++i) {
    const double f = envelope_value(env, trace.tau[i]);
    if (f <= floor) continue;
    d.tau.push_back(trace.tau[i]);
    d.f.push_back(f);
    d.y.push_back(use_variance ? trace.variance[i] : trace.mean_shift[i]);
  }
  return d;
}

struct VarModel {
  // m = A/2 f^2 (1 - cos(2 w tau - theta)) + b
  double A = 0.0, theta = 0.0, b = 0.0;
};

double var_model_ssr(const FitData& d, double omega, const VarModel& m) {
  double ss = 0.0;
  for (size_t i = 0; i < d.tau.size(); ++i) {
    const double f2 = d.f[i] * d.f[i];
    const double v = 0.5 * m.A * f2 * (1.0 - std::cos(2.0 * omega * d.tau[i] - m.theta)) + m.b;
    ss += (d.y[i] - v) * (d.y[i] - v);
  }
  return ss;
}

}  // namespace

MeanFit fit_mean(const MomentTrace& trace, double omega, const Envelope& env,
                 const FitOptions& opts) {
  const FitData d = select_points(trace, env, false, opts.envelope_floor);
  const int n = static_cast<int>(d.tau.size());
  if (n < 4) {
    throw ValidationError("fit_mean: fewer than 4 usable delays (envelope zero?)");
  }

  // model: y = -f(tau) [c1 cos w tau + c2 sin w tau]; linear least squares
  std::array<std::array<double, 2>, 2> ata{};
  std::array<double, 2> atb{};
  for (int i = 0; i < n; ++i) {
    const double bc = -d.f[i] * std::cos(omega * d.tau[i]);
    const double bs = -d.f[i] * std::sin(omega * d.tau[i]);
    ata[0][0] += bc * bc;
    ata[0][1] += bc * bs;
    ata[1][1] += bs * bs;
    atb[0] += bc * d.y[i];
    atb[1] += bs * d.y[i];
  }
  ata[1][0] = ata[0][1];
  const double det = ata[0][0] * ata[1][1] - ata[0][1] * ata[0][1];
  const double scale = std::max(ata[0][0], ata[1][1]);
  if (!(det > 1e-12 * scale * scale) || !(scale > 0.0)) {
    throw NumericalError("fit_mean: rank-deficient basis (envelope vanishes on window)");
  }
  const std::array<double, 2> c = solve<2>(ata, atb);

  MeanFit fit;
  fit.n_used = n;
  fit.amplitude = std::hypot(c[0], c[1]);
  fit.phi_streak = std::atan2(c[1], c[0]);  // in (-pi, pi]
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double model = -fit.amplitude * d.f[i] * std::cos(omega * d.tau[i] - fit.phi_streak);
    ss += (d.y[i] - model) * (d.y[i] - model);
  }
  fit.residual_rms = std::sqrt(ss / n);

  // parameter covariance sigma^2 (A^T A)^{-1}, mapped to (amplitude, phase)
  const double dof = std::max(1, n - 2);
  const double s2 = ss / dof;
  const double inv00 = ata[1][1] / det, inv11 = ata[0][0] / det, inv01 = -ata[0][1] / det;
  if (fit.amplitude > 0.0) {
    const double ca = c[0] / fit.amplitude, sa = c[1] / fit.amplitude;
    fit.amplitude_var = s2 * (ca * ca * inv00 + 2 * ca * sa * inv01 + sa * sa * inv11);
    fit.phase_var = s2 * (sa * sa * inv00 - 2 * sa * ca * inv01 + ca * ca * inv11) /
                    (fit.amplitude * fit.amplitude);
  }
  return fit;
}

VarianceFit fit_variance(const MomentTrace& trace, double omega, const Envelope& env,
                         const FitOptions& opts) {
  for (double v : trace.variance) {
    if (!(v > 0.0)) throw ValidationError("fit_variance: variance trace must be positive");
  }
  const FitData d = select_points(trace, env, true, opts.envelope_floor);
  const int n = static_cast<int>(d.tau.size());
  if (n < 5) {
    throw ValidationError("fit_variance: fewer than 5 usable delays (envelope zero?)");
  }

  // linear initialization in (g0, gc, gs, b):
  // y = g0/2 f^2 - gc/2 f^2 cos 2wt - gs/2 f^2 sin 2wt + b
  VarModel m;
  {
    std::array<std::array<double, 4>, 4> ata{};
    std::array<double, 4> atb{};
    for (int i = 0; i < n; ++i) {
      const double f2 = d.f[i] * d.f[i];
      const std::array<double, 4> row = {
          0.5 * f2, -0.5 * f2 * std::cos(2 * omega * d.tau[i]),
          -0.5 * f2 * std::sin(2 * omega * d.tau[i]), 1.0};
      for (int a = 0; a < 4; ++a) {
        for (int b2 = 0; b2 < 4; ++b2) ata[a][b2] += row[a] * row[b2];
        atb[a] += row[a] * d.y[i];
      }
    }
    std::array<double, 4> g{};
    try {
      g = solve<4>(ata, atb);
    } catch (const NumericalError&) {
      throw NumericalError("fit_variance: rank-deficient basis");
    }
    // consistent-model projection: the modulated and DC f^2 coefficients agree
    m.A = 0.5 * (std::max(0.0, g[0]) + std::hypot(g[1], g[2]));
    m.theta = std::atan2(g[2], g[1]);
    m.b = g[3];
  }

  // damped Gauss-Newton refinement of (A, theta, b)
  double lambda = 1e-6;
  double ssr = var_model_ssr(d, omega, m);
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    std::array<std::array<double, 3>, 3> jtj{};
    std::array<double, 3> jtr{};
    for (int i = 0; i < n; ++i) {
      const double f2 = d.f[i] * d.f[i];
      const double u = 2.0 * omega * d.tau[i] - m.theta;
      const double model = 0.5 * m.A * f2 * (1.0 - std::cos(u)) + m.b;
      const double r = d.y[i] - model;
      const std::array<double, 3> j = {0.5 * f2 * (1.0 - std::cos(u)),
                                       -0.5 * m.A * f2 * std::sin(u), 1.0};
      for (int a = 0; a < 3; ++a) {
        for (int b2 = 0; b2 < 3; ++b2) jtj[a][b2] += j[a] * j[b2];
        jtr[a] += j[a] * r;
      }
    }
    std::array<std::array<double, 3>, 3> damped = jtj;
    for (int a = 0; a < 3; ++a) damped[a][a] += lambda * (jtj[a][a] + 1e-300);
    std::array<double, 3> step{};
    try {
      step = solve<3>(damped, jtr);
    } catch (const NumericalError&) {
      break;  // singular at an exact fit with A = 0
    }
    VarModel trial = m;
    trial.A += step[0];
    trial.theta += step[1];
    trial.b += step[2];
    const double trial_ssr = var_model_ssr(d, omega, trial);
    if (trial_ssr <= ssr) {
      const double rel = std::abs(ssr - trial_ssr);
      m = trial;
      ssr = trial_ssr;
      lambda = std::max(lambda / 3.0, 1e-12);
      const double step_scale = std::abs(step[0]) + std::abs(step[1]) + std::abs(step[2]);
      if (step_scale < 1e-14 * (1.0 + std::abs(m.A) + std::abs(m.b)) || rel == 0.0) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }

  if (m.A < 0.0) {
    // inverted modulation is non-physical; restart the refinement at A = 0
    m.A = 0.0;
    ssr = var_model_ssr(d, omega, m);
  }
  m.theta = wrap_two_pi(m.theta);

  VarianceFit fit;
  fit.n_used = n;
  fit.amplitude = m.A;
  fit.theta_streak = m.theta;
  fit.sigma0_sq = m.b;
  fit.sigma0_nonphysical = m.b < 0.0;
  fit.residual_rms = std::sqrt(ssr / n);

  // covariance estimate from the final Jacobian
  {
    std::array<std::array<double, 3>, 3> jtj{};
    for (int i = 0; i < n; ++i) {
      const double f2 = d.f[i] * d.f[i];
      const double u = 2.0 * omega * d.tau[i] - m.theta;
      const std::array<double, 3> j = {0.5 * f2 * (1.0 - std::cos(u)),
                                       -0.5 * m.A * f2 * std::sin(u), 1.0};
      for (int a = 0; a < 3; ++a)
        for (int b2 = 0; b2 < 3; ++b2) jtj[a][b2] += j[a] * j[b2];
    }
    const double s2 = ssr / std::max(1, n - 3);
    try {
      const std::array<double, 3> e0 = solve<3>(jtj, {1.0, 0.0, 0.0});
      const std::array<double, 3> e1 = solve<3>(jtj, {0.0, 1.0, 0.0});
      const std::array<double, 3> e2 = solve<3>(jtj, {0.0, 0.0, 1.0});
      fit.amplitude_var = s2 * e0[0];
      fit.phase_var = s2 * e1[1];
      fit.sigma0_var = s2 * e2[2];
    } catch (const NumericalError&) {
      // degenerate (A = 0): leave covariances at zero
    }
  }
  return fit;
}

double calibrate_delta(const MomentTrace& reference, double known_phi, double omega,
                       const Envelope& env, const FitOptions& opts) {
  const MeanFit fit = fit_mean(reference, omega, env, opts);
  return wrap_pi(fit.phi_streak - known_phi);
}

RetrievalReport retrieve(const MomentTrace& trace, double delta, double omega,
                         const Envelope& env, const FitOptions& opts) {
  RetrievalReport rep;
  rep.mean_fit = fit_mean(trace, omega, env, opts);
  rep.variance_fit = fit_variance(trace, omega, env, opts);
  rep.delta = delta;
  rep.phi_streak = rep.mean_fit.phi_streak;
  rep.theta_streak = rep.variance_fit.theta_streak;
  rep.phi = rep.phi_streak - delta;
  rep.theta = wrap_two_pi(rep.theta_streak - 2.0 * delta);
  rep.e_coh = omega * rep.mean_fit.amplitude;
  rep.e_sq = omega * std::sqrt(std::max(0.0, rep.variance_fit.amplitude));
  rep.sigma0_sq = rep.variance_fit.sigma0_sq;
  rep.residual_mean = rep.mean_fit.residual_rms;
  rep.residual_var = rep.variance_fit.residual_rms;
  return rep;
}

}  // namespace qstreak
