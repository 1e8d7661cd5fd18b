#include "qstreak/run_config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "qstreak/errors.hpp"
#include "qstreak/units.hpp"

namespace qstreak {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') {
    throw ValidationError("config: bad numeric value for " + key + ": '" + value + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') {
    throw ValidationError("config: bad integer value for " + key + ": '" + value + "'");
  }
  return v;
}

struct KeyBinding {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

using Schema = std::vector<std::pair<std::string, KeyBinding>>;

const Schema& schema() {
  static const Schema s = [] {
    Schema v;
    auto dbl = [&v](const std::string& key, double RunConfig::*member) {
      v.push_back({key,
                   {[member](RunConfig& c, const std::string& k, const std::string& val) {
                      c.*member = parse_double(k, val);
                    },
                    [member](const RunConfig& c) { return fmt(c.*member); }}});
    };
    auto str = [&v](const std::string& key, std::string RunConfig::*member) {
      v.push_back({key,
                   {[member](RunConfig& c, const std::string&, const std::string& val) {
                      c.*member = val;
                    },
                    [member](const RunConfig& c) { return c.*member; }}});
    };
    auto i32 = [&v](const std::string& key, int RunConfig::*member) {
      v.push_back({key,
                   {[member](RunConfig& c, const std::string& k, const std::string& val) {
                      c.*member = static_cast<int>(parse_int(k, val));
                    },
                    [member](const RunConfig& c) { return std::to_string(c.*member); }}});
    };

    str("light.mode", &RunConfig::light_mode);
    dbl("light.phi_rad", &RunConfig::phi_rad);
    dbl("light.theta_rad", &RunConfig::theta_rad);
    dbl("light.i_coherent_wcm2", &RunConfig::i_coherent_wcm2);
    dbl("light.i_squeezed_wcm2", &RunConfig::i_squeezed_wcm2);
    dbl("light.alpha_mag", &RunConfig::alpha_mag);
    dbl("light.r", &RunConfig::r);
    dbl("light.e_vac_au", &RunConfig::e_vac_au);
    dbl("ir.wavelength_nm", &RunConfig::wavelength_nm);
    str("ir.envelope_shape", &RunConfig::ir_envelope_shape);
    dbl("ir.envelope_cycles", &RunConfig::ir_envelope_cycles);
    dbl("xuv.photon_energy_ev", &RunConfig::xuv_photon_energy_ev);
    dbl("xuv.intensity_wcm2", &RunConfig::xuv_intensity_wcm2);
    dbl("xuv.duration_fwhm_as", &RunConfig::xuv_duration_fwhm_as);
    dbl("tdse.x_min_au", &RunConfig::x_min_au);
    dbl("tdse.x_max_au", &RunConfig::x_max_au);
    i32("tdse.n_points", &RunConfig::n_points);
    dbl("tdse.dt_au", &RunConfig::dt_au);
    dbl("tdse.absorber_width_au", &RunConfig::absorber_width_au);
    dbl("tdse.softcore_a2", &RunConfig::softcore_a2);
    dbl("tdse.mask_radius_au", &RunConfig::mask_radius_au);
    dbl("tdse.mask_ramp_au", &RunConfig::mask_ramp_au);
    dbl("scan.delay_span_cycles", &RunConfig::delay_span_cycles);
    i32("scan.delay_count", &RunConfig::delay_count);
    i32("scan.quadrature_order", &RunConfig::quadrature_order);
    str("scan.quadrature_mode", &RunConfig::quadrature_mode);
    dbl("scan.window_halfwidth_au", &RunConfig::window_halfwidth_au);
    dbl("scan.drift_time_au", &RunConfig::drift_time_au);
    v.push_back({"run.seed",
                 {[](RunConfig& c, const std::string& k, const std::string& val) {
                    c.seed = static_cast<std::uint64_t>(parse_int(k, val));
                  },
                  [](const RunConfig& c) { return std::to_string(c.seed); }}});
    i32("run.threads", &RunConfig::threads);
    str("run.out_dir", &RunConfig::out_dir);
    return v;
  }();
  return s;
}

const KeyBinding* find_binding(const std::string& key) {
  for (const auto& [k, b] : schema()) {
    if (k == key) return &b;
  }
  return nullptr;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError("config line " + std::to_string(line_no) +
                              ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected key = value");
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const KeyBinding* binding = find_binding(key);
    if (!binding) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": unknown key '" + key + "'");
    }
    binding->set(config, key, value);
    config.provided.insert(key);
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& [key, binding] : schema()) {
    const size_t dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + binding.get(config) + "\n";
  }
  return out;
}

std::map<std::string, std::string> config_to_map(const RunConfig& config) {
  std::map<std::string, std::string> m;
  for (const auto& [key, binding] : schema()) m[key] = binding.get(config);
  return m;
}

void validate(const RunConfig& c) {
  if (c.light_mode != "exact" && c.light_mode != "macroscopic") {
    throw ValidationError("config: light.mode must be 'exact' or 'macroscopic'");
  }
  const bool exact_given = c.provided.count("light.alpha_mag") ||
                           c.provided.count("light.r") || c.provided.count("light.e_vac_au");
  const bool macro_given = c.provided.count("light.i_coherent_wcm2") ||
                           c.provided.count("light.i_squeezed_wcm2");
  if (c.light_mode == "exact" && macro_given) {
    throw ValidationError("config: exact mode must not specify intensities");
  }
  if (c.light_mode == "macroscopic" && exact_given) {
    throw ValidationError("config: macroscopic mode must not specify |alpha|, r, E_V");
  }
  if (c.quadrature_mode != "exact" && c.quadrature_mode != "macroscopic") {
    throw ValidationError("config: scan.quadrature_mode must be 'exact' or 'macroscopic'");
  }
  if (!(c.wavelength_nm > 0.0)) throw ValidationError("config: ir.wavelength_nm must be > 0");
  if (!(c.ir_envelope_cycles > 0.0)) {
    throw ValidationError("config: ir.envelope_cycles must be > 0");
  }
  if (!(c.xuv_photon_energy_ev > 0.0) || c.xuv_intensity_wcm2 < 0.0 ||
      !(c.xuv_duration_fwhm_as > 0.0)) {
    throw ValidationError("config: invalid [xuv] block");
  }
  if (c.delay_count < 1 || !(c.delay_span_cycles > 0.0)) {
    throw ValidationError("config: invalid [scan] delay grid");
  }
  if (c.quadrature_order < 1) throw ValidationError("config: quadrature_order must be >= 1");
  if (!(c.window_halfwidth_au > 0.0) || !(c.drift_time_au > 0.0)) {
    throw ValidationError("config: invalid [scan] window or drift");
  }
  if (c.threads < 0) throw ValidationError("config: run.threads must be >= 0");
  validate(SpatialGrid{c.x_min_au, c.x_max_au, c.n_points, c.dt_au, c.absorber_width_au,
                       c.softcore_a2, c.mask_radius_au, c.mask_ramp_au});
}

double RunConfig::omega() const { return wavelength_to_omega(wavelength_nm); }

double RunConfig::ir_period() const { return 2.0 * units::pi / omega(); }

LightState RunConfig::light_state() const {
  if (light_mode == "exact") {
    return make_exact_state(alpha_mag, phi_rad, r, theta_rad, omega(), e_vac_au);
  }
  return make_macroscopic_state_from_intensity(i_coherent_wcm2, i_squeezed_wcm2, phi_rad,
                                               theta_rad, omega());
}

Envelope RunConfig::ir_envelope() const {
  Envelope env;
  env.shape = envelope_shape_from_string(ir_envelope_shape);
  env.duration = ir_envelope_cycles * ir_period();
  env.center = 0.0;  // peak at the delay-scan center
  return env;
}

XuvPulse RunConfig::xuv_pulse() const {
  return make_xuv_pulse(units::ev_to_au(xuv_photon_energy_ev),
                        intensity_to_field(xuv_intensity_wcm2),
                        units::as_to_au(xuv_duration_fwhm_as));
}

SpatialGrid RunConfig::spatial_grid() const {
  SpatialGrid g{x_min_au, x_max_au, n_points, dt_au, absorber_width_au,
                softcore_a2, mask_radius_au, mask_ramp_au};
  validate(g);
  return g;
}

QuadratureMode RunConfig::quad_mode() const {
  return quadrature_mode == "exact" ? QuadratureMode::exact_2d
                                    : QuadratureMode::macroscopic_1d;
}

std::vector<double> RunConfig::delays() const {
  const double half = 0.5 * delay_span_cycles * ir_period();
  return uniform_delays(-half, half, delay_count);
}

ScanConfig RunConfig::scan_config() const {
  ScanConfig s;
  s.delays = delays();
  s.drift_time = drift_time_au;
  s.window_halfwidth = window_halfwidth_au;
  s.threads = threads > 0 ? threads
                          : std::max(1u, std::thread::hardware_concurrency());
  return s;
}

std::vector<BetaNode> RunConfig::nodes() const {
  return quadrature_nodes(light_state(), quadrature_order, quad_mode());
}

}  // namespace qstreak
