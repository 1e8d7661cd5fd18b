#include "qstreak/quadrature.hpp"

#include <cmath>
#include <string>

#include "qstreak/errors.hpp"
#include "qstreak/units.hpp"

namespace qstreak {

namespace {

// Orthonormal Hermite functions via the three-term recurrence; returns
// (p_n(x), p_n'(x), sum_{k<n} p_k(x)^2). Stable for the orders used here.
struct HermiteEval {
  double value;
  double derivative;
  double christoffel_sum;
};

HermiteEval hermite_orthonormal(int n, double x) {
  const double pi4 = std::pow(units::pi, -0.25);
  double pm1 = 0.0;       // p_{k-1}
  double pk = pi4;        // p_0
  double sum = pk * pk;
  for (int k = 0; k < n; ++k) {
    const double pk1 = x * std::sqrt(2.0 / (k + 1)) * pk -
                       std::sqrt(static_cast<double>(k) / (k + 1)) * pm1;
    pm1 = pk;
    pk = pk1;
    if (k + 1 < n) sum += pk * pk;
  }
  // p_n' = sqrt(2n) p_{n-1}
  return {pk, std::sqrt(2.0 * n) * pm1, sum};
}

}  // namespace

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw ValidationError("gauss_hermite: order must be >= 1");
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = std::sqrt(units::pi);
    return rule;
  }

  // Bracket the positive roots by scanning for sign changes, then polish
  // with Newton. All roots lie inside |x| < sqrt(2n + 1).
  const double x_hi = std::sqrt(2.0 * n + 1.0) + 0.5;
  const int n_scan = 64 * n;
  const double dx = x_hi / n_scan;
  const int n_pos = n / 2;           // strictly positive roots
  const bool has_zero = (n % 2) == 1;

  int found = 0;
  double prev_x = has_zero ? 0.0 : 0.5 * dx;
  double prev_v = hermite_orthonormal(n, prev_x).value;
  std::vector<double> roots;
  roots.reserve(n_pos);
  for (int i = 1; i <= n_scan && found < n_pos; ++i) {
    const double x = (has_zero ? 0.0 : 0.5 * dx) + i * dx;
    const double v = hermite_orthonormal(n, x).value;
    if (prev_v == 0.0) {
      roots.push_back(prev_x);
      ++found;
    } else if (v * prev_v < 0.0) {
      double root = 0.5 * (prev_x + x);
      for (int it = 0; it < 60; ++it) {
        const HermiteEval e = hermite_orthonormal(n, root);
        const double step = e.value / e.derivative;
        root -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(root))) break;
      }
      roots.push_back(root);
      ++found;
    }
    prev_x = x;
    prev_v = v;
  }
  if (found != n_pos) {
    throw NumericalError("gauss_hermite: failed to locate all roots for n = " +
                         std::to_string(n));
  }

  if (has_zero) {
    rule.nodes[n_pos] = 0.0;
  }
  for (int i = 0; i < n_pos; ++i) {
    const double x = roots[i];
    rule.nodes[n_pos + (has_zero ? 1 : 0) + i] = x;
    rule.nodes[n_pos - 1 - i] = -x;
  }
  for (int i = 0; i < n; ++i) {
    const HermiteEval e = hermite_orthonormal(n, rule.nodes[i]);
    rule.weights[i] = 1.0 / e.christoffel_sum;
  }
  return rule;
}

std::vector<BetaNode> quadrature_nodes(const LightState& state, int n_per_axis,
                                       QuadratureMode mode) {
  if (n_per_axis < 1) throw ValidationError("quadrature_nodes: n_per_axis must be >= 1");
  validate(state);

  std::vector<BetaNode> nodes;
  if (mode == QuadratureMode::exact_2d) {
    if (state.mode != LightMode::exact) {
      throw ValidationError("exact-2D quadrature requires an exact-mode light state");
    }
    const GaussHermiteRule rule = gauss_hermite(n_per_axis);
    const BetaCovariance cov = beta_covariance(state);
    const double su = std::sqrt(2.0 * cov.var_sq);
    const double sv = std::sqrt(2.0 * cov.var_anti);
    nodes.reserve(static_cast<size_t>(n_per_axis) * n_per_axis);
    for (int i = 0; i < n_per_axis; ++i) {
      for (int j = 0; j < n_per_axis; ++j) {
        BetaNode node;
        node.point.bx = cov.mean_x + su * rule.nodes[i] * cov.axis_sq_x +
                        sv * rule.nodes[j] * cov.axis_anti_x;
        node.point.by = cov.mean_y + su * rule.nodes[i] * cov.axis_sq_y +
                        sv * rule.nodes[j] * cov.axis_anti_y;
        node.weight = rule.weights[i] * rule.weights[j];
        node.mode = QuadratureMode::exact_2d;
        nodes.push_back(node);
      }
    }
  } else {
    // 1D nodes along the anti-squeezed axis of the reduced field distribution
    const GaussHermiteRule rule = gauss_hermite(n_per_axis);
    nodes.reserve(n_per_axis);
    for (int i = 0; i < n_per_axis; ++i) {
      BetaNode node;
      node.s = std::sqrt(2.0) * state.e_sq * rule.nodes[i];
      node.weight = rule.weights[i];
      node.mode = QuadratureMode::macroscopic_1d;
      nodes.push_back(node);
    }
  }

  double total = 0.0;
  for (const BetaNode& node : nodes) total += node.weight;
  for (BetaNode& node : nodes) node.weight /= total;
  return nodes;
}

}  // namespace qstreak
