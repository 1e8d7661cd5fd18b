#pragma once

// Atomic-unit conversions. Hartree units throughout the library:
// hbar = m_e = e = 1, energies in hartree, times in a.u. (1 a.u. = 24.18884254 as).
namespace qstreak::units {

inline constexpr double hartree_ev = 27.2114;            // 1 hartree in eV
inline constexpr double bohr_nm = 0.0529177;             // 1 bohr in nm
inline constexpr double speed_of_light = 137.036;        // a.u.
inline constexpr double intensity_au = 3.50945e16;       // W/cm^2 per atomic intensity unit
inline constexpr double attosecond_au = 24.18884254;     // attoseconds per a.u. of time
inline constexpr double pi = 3.14159265358979323846;

inline constexpr double ev_to_au(double ev) { return ev / hartree_ev; }
inline constexpr double au_to_ev(double e) { return e * hartree_ev; }
inline constexpr double nm_to_au(double nm) { return nm / bohr_nm; }
inline constexpr double as_to_au(double as) { return as / attosecond_au; }
inline constexpr double fs_to_au(double fs) { return fs * 1000.0 / attosecond_au; }
inline constexpr double au_to_as(double t) { return t * attosecond_au; }
inline constexpr double field_to_intensity(double e_au) {
  return e_au * e_au * intensity_au;
}

}  // namespace qstreak::units
