#pragma once

namespace spincool::constants {

// CODATA 2018 exact values (SI). hbar enters only through the
// photon-number <-> temperature conversion; everything else runs
// in hbar = 1 units.
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double boltzmann = 1.380649e-23;    // J / K
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

} // namespace spincool::constants
