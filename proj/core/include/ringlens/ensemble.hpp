#pragma once

#include <cstdint>
#include <vector>

#include "ringlens/config.hpp"
#include "ringlens/constants.hpp"
#include "ringlens/potential.hpp"

namespace ringlens::ens {

/// Collisionless thermal cloud as phase-space samples (angle, angular
/// velocity), uniform weights. Angles are tracked unwrapped from launch —
/// clouds cover several ring circumferences and wrapping would corrupt
/// the size statistics; wrapped_angles() maps back onto [0, 2 pi).
struct ParticleEnsemble {
    std::vector<double> angle;             // rad, unwrapped
    std::vector<double> angular_velocity;  // rad/s
    double ring_radius = 0.0;              // m

    std::size_t size() const { return angle.size(); }
    std::vector<double> wrapped_angles() const;
};

/// Boltzmann sample for a harmonic azimuthal trap: positions with
/// sigma_phi = sqrt(kB T / (m omega^2 R^2)), velocities with
/// sigma = sqrt(kB T / (m R^2)). Deterministic for a fixed seed.
ParticleEnsemble sample_thermal(double temperature, double trap_omega, double trap_center,
                                std::size_t count, double ring_radius,
                                const PhysicalConstants& constants, std::uint64_t seed);

/// Velocity-Verlet (kick-drift-kick) propagation through V(phi, t) for
/// `duration`, starting at stage-local time t0. Zero-potential stages
/// reduce to exact ballistic drift.
void step(ParticleEnsemble& ensemble, const StagePotential& potential, double t0, double duration,
          double dt, const PhysicalConstants& constants);

/// Idealized delta-kick: exact phase-space rotation by theta = omega tau
/// about the lens center. Serves as the analytic oracle for step() with
/// the cosine lens in the small-angle regime.
void thin_kick(ParticleEnsemble& ensemble, double omega_lens, double tau, double phi_c);

struct CloudSize {
    double r_1e = 0.0;      // m, sqrt(2) * sigma (Gaussian 1/e radius)
    double sigma = 0.0;     // m, arc-length standard deviation
    double com = 0.0;       // rad, circular mean in [0, 2 pi)
    double com_rate = 0.0;  // rad/s
    bool wrapped = false;   // cloud fills the ring; sizes unreliable
};

CloudSize cloud_size(const ParticleEnsemble& ensemble);

}  // namespace ringlens::ens
