#pragma once

#include <complex>
#include <vector>

#include "ringlens/config.hpp"
#include "ringlens/constants.hpp"
#include "ringlens/potential.hpp"

namespace ringlens::gpe {

/// Condensate order parameter on a uniform periodic azimuthal grid,
/// phi_j = 2 pi j / N. Normalization: R * sum |psi_j|^2 * dphi = N_a,
/// so |psi|^2 is the line density along the ring.
///
/// The stored amplitudes are the envelope of psi = exp(i carrier phi) chi:
/// a launched cloud winds ~2e4 times around the ring, far beyond any
/// affordable grid, so the integer carrier keeps the envelope spectrum
/// centered while the kinetic operator uses the exact (k + carrier)^2
/// eigenvalues. rebase() moves the carrier; it is an exact relabeling.
struct WaveFunction {
    std::vector<std::complex<double>> amplitude;
    double atom_number = 0.0;
    double ring_radius = 0.0;
    long long carrier = 0;  // winding offset of the stored envelope

    int n() const { return static_cast<int>(amplitude.size()); }
    double dphi() const { return two_pi / n(); }
    double norm() const;  // R * sum |psi|^2 * dphi
    void normalize();     // rescale to atom_number
};

/// Re-expresses the state with a new carrier winding (exact, unitary).
void rebase(WaveFunction& psi, long long new_carrier);

/// Carrier winding nearest to a given angular velocity.
long long carrier_for_rate(double angular_velocity, double ring_radius,
                           const PhysicalConstants& constants);

/// 1D interaction strength from the transverse confinement,
/// g1d = 2 hbar omega_perp a_s.
double effective_g1d(double omega_perp, const PhysicalConstants& constants);

/// Imaginary-time propagation to the ground state of trap + interactions.
/// Converges when the relative energy change per step drops below
/// params.imaginary_time_tolerance; throws ConvergenceError after
/// params.max_imag_steps.
WaveFunction ground_state(const StagePotential& trap, double atom_number, double ring_radius,
                          double g1d, const PhysicalConstants& constants,
                          const SolverParams& params);

/// Strang-split spectral step: half potential+interaction phase, full
/// kinetic step in the angular-momentum basis (eigenvalues
/// hbar^2 k^2 / (2 m R^2)), half phase. Periodic boundary is exact.
/// t0 is the stage-local time of the potential at the start.
void evolve(WaveFunction& psi, const StagePotential& potential, double t0, double duration,
            double dt, double g1d, const PhysicalConstants& constants);

struct Observables {
    double com_angle = 0.0;        // rad, circular mean of the density
    double com_velocity = 0.0;     // rad/s, hbar <k> / (m R^2)
    double tf_radius = 0.0;        // m, arc length, inverted-parabola fit
    double rms_width = 0.0;        // m, arc length
    double energy_total = 0.0;     // J (kin + pot + int)
    double energy_kinetic = 0.0;   // J
    double energy_potential = 0.0; // J
    double energy_interaction = 0.0;  // J
    bool tf_fit_ok = false;
    bool wrapped = false;          // density fills the ring
};

/// Density and energy observables. The potential (with its stage-local
/// time) is needed for the potential-energy term; pass nullptr to skip it.
Observables observe(const WaveFunction& psi, const StagePotential* potential, double t,
                    double g1d, const PhysicalConstants& constants);

}  // namespace ringlens::gpe
