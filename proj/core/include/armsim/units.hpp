#pragma once

// SI constants (CODATA 2018 exact values) and the conversions between SI
// energies and the GHz linear-frequency unit used everywhere else.

#include <numbers>

namespace armsim::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double hbar = planck / two_pi;               // J s
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge);  // Wb

inline constexpr double hz_per_ghz = 1e9;
inline constexpr double ghz_per_mhz = 1e-3;

/// Energy in joules expressed as a linear frequency E/h in GHz.
constexpr double joules_to_ghz(double energy) { return energy / planck / hz_per_ghz; }
constexpr double ghz_to_joules(double f_ghz) { return f_ghz * hz_per_ghz * planck; }

/// Angular frequency in rad/s expressed as a linear frequency in GHz.
constexpr double rad_per_s_to_ghz(double omega) { return omega / two_pi / hz_per_ghz; }

}  // namespace armsim::units
