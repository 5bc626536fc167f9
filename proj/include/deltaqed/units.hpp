#pragma once

#include <numbers>

namespace deltaqed {

// Unit convention: all public I/O (config files, CSV, CLI flags) is in
// ordinary frequency (GHz), voltages in volts, impedances in ohms. All
// internal math runs in angular frequency with time in nanoseconds
// (rad/ns), so a rate quoted as x GHz becomes 2*pi*x internally. The
// factor 2*pi is applied exactly once, at this boundary.
namespace units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double from_ghz(double ordinary_ghz) { return two_pi * ordinary_ghz; }
constexpr double to_ghz(double angular_rad_per_ns) { return angular_rad_per_ns / two_pi; }

// rad/ns -> rad/s
constexpr double to_si_angular(double angular_rad_per_ns) { return angular_rad_per_ns * 1e9; }

}  // namespace units

// Physical constants, CODATA 2018, 10 significant digits.
//
//   elementary_charge   e    1.602176634e-19 C   (exact)
//   planck_h            h    6.62607015e-34  J s (exact)
//   hbar                h/2pi  1.054571817e-34 J s
//   resistance_quantum  h/(4 e^2)  6453.201865 ohm
namespace constants {

inline constexpr double elementary_charge = 1.602176634e-19;
inline constexpr double planck_h = 6.62607015e-34;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double resistance_quantum = 6453.201865;

}  // namespace constants

}  // namespace deltaqed
