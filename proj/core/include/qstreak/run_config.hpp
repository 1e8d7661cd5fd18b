#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qstreak/ensemble.hpp"
#include "qstreak/fields.hpp"
#include "qstreak/grid.hpp"
#include "qstreak/light_state.hpp"
#include "qstreak/quadrature.hpp"

namespace qstreak {

// Flat key = value configuration with [section] brackets. Physical inputs are
// lab units (nm, eV, W/cm^2, as) and convert to atomic units when the domain
// objects are built. Defaults reproduce the reference simulation setup.
struct RunConfig {
  // [light]
  std::string light_mode = "macroscopic";  // exact | macroscopic
  double phi_rad = 0.7853981633974483;
  double theta_rad = 1.5707963267948966;
  double i_coherent_wcm2 = 2.5e11;
  double i_squeezed_wcm2 = 7.5e11;
  double alpha_mag = 0.0;
  double r = 0.0;
  double e_vac_au = 0.0;

  // [ir]
  double wavelength_nm = 800.0;
  std::string ir_envelope_shape = "cos2";
  double ir_envelope_cycles = 8.0;  // full duration in optical cycles

  // [xuv]
  double xuv_photon_energy_ev = 54.0;
  double xuv_intensity_wcm2 = 1e12;
  double xuv_duration_fwhm_as = 250.0;

  // [tdse]
  double x_min_au = -600.0;
  double x_max_au = 600.0;
  int n_points = 8192;
  double dt_au = 0.0125;
  double absorber_width_au = 100.0;
  double softcore_a2 = 2.0;
  double mask_radius_au = 20.0;
  double mask_ramp_au = 10.0;

  // [scan]
  double delay_span_cycles = 2.0;  // delays on [-span/2, span/2) IR periods
  int delay_count = 64;
  int quadrature_order = 16;
  std::string quadrature_mode = "macroscopic";  // exact | macroscopic
  double window_halfwidth_au = 0.7;
  double drift_time_au = 150.0;

  // [run]
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = "out";

  // keys explicitly present in the parsed text (defaults excluded)
  std::set<std::string> provided;

  // derived builders (validate on construction)
  double omega() const;
  double ir_period() const;
  LightState light_state() const;
  Envelope ir_envelope() const;
  XuvPulse xuv_pulse() const;
  SpatialGrid spatial_grid() const;
  QuadratureMode quad_mode() const;
  std::vector<double> delays() const;
  ScanConfig scan_config() const;
  std::vector<BetaNode> nodes() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

// flattened "section.key" -> value view, used for output-file headers
std::map<std::string, std::string> config_to_map(const RunConfig& config);

void validate(const RunConfig& config);

}  // namespace qstreak
