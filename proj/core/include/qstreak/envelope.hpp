#pragma once

#include <string>

namespace qstreak {

enum class EnvelopeShape { cosine_squared, gaussian, flat_top };

// Temporal envelope f(t) with 0 <= f <= 1 and f(center) = 1.
// duration is the full support for cosine_squared and flat_top, and the
// FWHM of f for gaussian. cosine_squared and flat_top are exactly zero
// outside their support.
struct Envelope {
  EnvelopeShape shape = EnvelopeShape::cosine_squared;
  double duration = 0.0;  // a.u. of time
  double center = 0.0;    // a.u. of time

  double support_min() const;
  double support_max() const;
};

double envelope_value(const Envelope& env, double t);

EnvelopeShape envelope_shape_from_string(const std::string& name);
std::string to_string(EnvelopeShape shape);

// omega = 2 pi c / lambda, in a.u. Throws ValidationError for lambda <= 0.
double wavelength_to_omega(double lambda_nm);

}  // namespace qstreak
