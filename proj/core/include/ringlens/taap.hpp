#pragma once

#include <functional>
#include <vector>

#include "ringlens/config.hpp"
#include "ringlens/constants.hpp"

namespace ringlens::taap {

struct Vec3 {
    double x = 0, y = 0, z = 0;
};

/// DC quadrupole field B = b'(x, y, -2z).
Vec3 quadrupole_field(const Vec3& point, double gradient);

/// Optional position-dependent RF coupling Omega(r). The default model is
/// the constant config Rabi frequency; orientation-dependent couplings
/// plug in here without touching the potential code.
using CouplingModel = std::function<double(const Vec3&)>;

/// Adiabatic dressed-state potential at one instant of the audio cycle:
///   V = hbar sqrt(detuning^2 + Omega^2) + tilted gravity term,
/// detuning = mu_eff |B| / hbar - w_rf, with the instantaneous field being
/// the quadrupole plus the vertical audio bias B_m sin(audio_phase).
/// Throws DegenerateFieldError where |B| = 0.
double dressed_potential(const Vec3& point, const TaapConfig& taap,
                         const PhysicalConstants& constants, double audio_phase,
                         const CouplingModel& coupling = nullptr);

inline constexpr int kAudioQuadratureNodes = 256;

/// Audio-cycle average of the dressed potential by fixed uniform
/// quadrature. The integrand has an Omega_0-smoothed kink where the
/// instantaneous field crosses the RF resonance, so the node count must
/// resolve that width; 256 nodes hold the doubling error below 1e-9.
/// Gravity enters once, tilted by (tilt, tilt_azimuth).
double taap_potential(const Vec3& point, const TaapConfig& taap,
                      const PhysicalConstants& constants,
                      int quadrature_nodes = kAudioQuadratureNodes);

struct RingLocation {
    double radius = 0;     // m
    double z0 = 0;         // m
    double potential = 0;  // J at the minimum
};

/// Locates the ring minimum of the untilted potential in the (rho, z)
/// half-plane. Throws CalibrationError when no off-axis minimum exists
/// (audio amplitude too small: the trap collapses to the shell bottom).
RingLocation ring_minimum(const TaapConfig& taap, const PhysicalConstants& constants);

/// Returns a config whose ring minimum sits at target_radius within 0.1%,
/// adjusting audio_amplitude and, when the target is outside the reachable
/// band, rf_frequency. Deterministic; throws CalibrationError when the
/// root-finding fails to bracket.
TaapConfig calibrate_ring(double target_radius, TaapConfig taap,
                          const PhysicalConstants& constants);

/// Reduced 1D azimuthal guide extracted from the full potential.
struct RingGuide1D {
    double radius = 0;            // m
    double z0 = 0;                // m
    double omega_perp = 0;        // rad/s, radial curvature at the minimum
    double omega_vertical = 0;    // rad/s, vertical curvature at the minimum
    std::vector<double> azimuthal_potential;  // V(phi_j), J, phi_j = 2 pi j / N
};

RingGuide1D reduce_to_guide(const TaapConfig& taap, const PhysicalConstants& constants,
                            int azimuthal_samples = 256);

/// Closed-form tilt lens along the ring: -m g R sin(delta) cos(phi - phi_c).
double lens_potential(double phi, double delta, double phi_c, double ring_radius,
                      const PhysicalConstants& constants);

/// Harmonic frequency at the lens minimum, sqrt(g sin(delta) / R).
double lens_frequency(double delta, double ring_radius, const PhysicalConstants& constants);

/// Tilt angle whose lens has the requested harmonic frequency.
double delta_for_frequency(double omega, double ring_radius, const PhysicalConstants& constants);

}  // namespace ringlens::taap
