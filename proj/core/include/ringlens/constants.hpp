#pragma once

#include <numbers>

namespace ringlens {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA-2018 Bohr magneton, J/T.
inline constexpr double bohr_magneton = 9.2740100783e-24;

/// Species and environment constants, SI throughout.
/// Defaults are 87Rb under standard gravity; every field is configurable.
struct PhysicalConstants {
    double atom_mass = 1.4432e-25;          // kg
    double gravity = 9.81;                  // m/s^2
    double hbar = 1.054571817e-34;          // J s
    double k_boltzmann = 1.380649e-23;      // J/K
    double scattering_length = 5.2e-9;      // m (s-wave)

    bool operator==(const PhysicalConstants&) const = default;
};

/// Energy in kelvin equivalents (E / k_B), handy for nK reporting.
inline double to_kelvin(double energy_joule, const PhysicalConstants& c) {
    return energy_joule / c.k_boltzmann;
}

}  // namespace ringlens
