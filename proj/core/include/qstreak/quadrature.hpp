#pragma once

#include <vector>

#include "qstreak/light_state.hpp"

namespace qstreak {

// Nodes and weights for int exp(-x^2) g(x) dx ~ sum_i w_i g(x_i)
// (physicists' convention, sum w_i = sqrt(pi)).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int n);

enum class QuadratureMode { exact_2d, macroscopic_1d };

// One member of the discretized phase-space integral. In exact-2D mode the
// member is the beta point; in macroscopic-1D mode it is the scalar field
// amplitude s along the anti-squeezed axis. Weights sum to 1.
struct BetaNode {
  PhaseSpacePoint point;  // exact-2D
  double s = 0.0;         // macroscopic-1D
  double weight = 0.0;
  QuadratureMode mode = QuadratureMode::macroscopic_1d;
};

std::vector<BetaNode> quadrature_nodes(const LightState& state, int n_per_axis,
                                       QuadratureMode mode);

}  // namespace qstreak
