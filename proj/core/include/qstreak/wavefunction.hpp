#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qstreak/grid.hpp"

namespace qstreak {

struct Wavefunction {
  std::vector<std::complex<double>> amp;

  double norm(const SpatialGrid& grid) const;  // sum |psi|^2 dx
  void normalize(const SpatialGrid& grid);

  // raw little-endian dump: int64 n, then n (re, im) doubles; for debugging
  void save_binary(const std::string& path, const SpatialGrid& grid) const;
  static Wavefunction load_binary(const std::string& path);
};

}  // namespace qstreak
