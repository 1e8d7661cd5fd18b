#include "qstreak/envelope.hpp"

#include <cmath>
#include <limits>

#include "qstreak/errors.hpp"
#include "qstreak/units.hpp"

namespace qstreak {

double Envelope::support_min() const {
  if (shape == EnvelopeShape::gaussian) {
    return center - 6.0 * duration;  // effective support, f < 1e-43 beyond
  }
  return center - 0.5 * duration;
}

double Envelope::support_max() const {
  if (shape == EnvelopeShape::gaussian) {
    return center + 6.0 * duration;
  }
  return center + 0.5 * duration;
}

double envelope_value(const Envelope& env, double t) {
  const double u = t - env.center;
  switch (env.shape) {
    case EnvelopeShape::cosine_squared: {
      if (std::abs(u) >= 0.5 * env.duration) return 0.0;
      const double c = std::cos(units::pi * u / env.duration);
      return c * c;
    }
    case EnvelopeShape::gaussian: {
      // duration is the FWHM of f: f(center +- duration/2) = 1/2
      const double x = u / env.duration;
      return std::exp(-4.0 * std::log(2.0) * x * x);
    }
    case EnvelopeShape::flat_top: {
      return std::abs(u) <= 0.5 * env.duration ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

EnvelopeShape envelope_shape_from_string(const std::string& name) {
  if (name == "cos2" || name == "cosine-squared") return EnvelopeShape::cosine_squared;
  if (name == "gaussian") return EnvelopeShape::gaussian;
  if (name == "flattop" || name == "flat-top") return EnvelopeShape::flat_top;
  throw ValidationError("unknown envelope shape: " + name);
}

std::string to_string(EnvelopeShape shape) {
  switch (shape) {
    case EnvelopeShape::cosine_squared: return "cos2";
    case EnvelopeShape::gaussian: return "gaussian";
    case EnvelopeShape::flat_top: return "flattop";
  }
  return "?";
}

double wavelength_to_omega(double lambda_nm) {
  if (!(lambda_nm > 0.0)) {
    throw ValidationError("wavelength must be positive, got " + std::to_string(lambda_nm));
  }
  return 2.0 * units::pi * units::speed_of_light / units::nm_to_au(lambda_nm);
}

}  // namespace qstreak
