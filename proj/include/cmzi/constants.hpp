#pragma once

#include <numbers>

// Exact SI values (2019 redefinition).
namespace cmzi::constants {

inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double reduced_planck = planck / (2.0 * std::numbers::pi);
inline constexpr double boltzmann = 1.380649e-23;             // J / K
inline constexpr double conductance_quantum = elementary_charge * elementary_charge / planck;  // e^2/h, S

// Measured (CODATA 2018).
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m

}  // namespace cmzi::constants
