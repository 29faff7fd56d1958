#pragma once

#include <cmath>

#include "ringlens/constants.hpp"

namespace ringlens {

/// Azimuthal potential of one sequence stage, V(phi, t) in joules with t
/// measured from the stage start. All stages are drawn from one family:
///
///   free          V = 0                      (untilted smooth guide)
///   cosine_well   V = -depth cos(phi - phi_c(t))   (tilt lens / trap)
///   harmonic      V = curvature/2 (phi - phi_c(t))^2  (test oracles)
///
/// with a preprogrammed center phi_c(t) = c0 + c1 t + c2 t^2 / 2. Plain
/// struct so the particle and spectral steppers inline the evaluation.
struct StagePotential {
    enum class Kind { free, cosine_well, harmonic };

    Kind kind = Kind::free;
    double depth = 0.0;        // J (cosine_well)
    double curvature = 0.0;    // J/rad^2 (harmonic)
    double center0 = 0.0;      // rad
    double center_rate = 0.0;  // rad/s
    double center_accel = 0.0; // rad/s^2

    double center(double t) const { return center0 + t * (center_rate + 0.5 * center_accel * t); }

    /// Relative coordinate wrapped to [-pi, pi): potentials live on the
    /// ring, so the harmonic well must be periodic too (its seam sits at
    /// the antipode where every use has vanishing density).
    static double wrap_pi(double u) {
        double w = std::fmod(u + pi, two_pi);
        if (w < 0.0) w += two_pi;
        return w - pi;
    }

    double value(double phi, double t) const {
        switch (kind) {
            case Kind::free: return 0.0;
            case Kind::cosine_well: return -depth * std::cos(phi - center(t));
            case Kind::harmonic: {
                const double u = wrap_pi(phi - center(t));
                return 0.5 * curvature * u * u;
            }
        }
        return 0.0;
    }

    double dvalue_dphi(double phi, double t) const {
        switch (kind) {
            case Kind::free: return 0.0;
            case Kind::cosine_well: return depth * std::sin(phi - center(t));
            case Kind::harmonic: return curvature * wrap_pi(phi - center(t));
        }
        return 0.0;
    }

    static StagePotential free_guide() { return {}; }

    /// Tilt lens of angle delta centered (and optionally co-moving /
    /// accelerating) at phi_c(t); depth = m g R sin(delta).
    static StagePotential tilt_lens(double delta, double phi_c, double phi_c_rate,
                                    double phi_c_accel, double ring_radius,
                                    const PhysicalConstants& c) {
        StagePotential p;
        if (delta == 0.0) return p;
        p.kind = Kind::cosine_well;
        p.depth = c.atom_mass * c.gravity * ring_radius * std::sin(delta);
        p.center0 = phi_c;
        p.center_rate = phi_c_rate;
        p.center_accel = phi_c_accel;
        return p;
    }

    /// Static harmonic well with angular frequency omega for a particle of
    /// mass m on a ring of radius R: curvature = m R^2 omega^2.
    static StagePotential harmonic_trap(double omega, double phi_c, double ring_radius,
                                        const PhysicalConstants& c) {
        StagePotential p;
        p.kind = Kind::harmonic;
        p.curvature = c.atom_mass * ring_radius * ring_radius * omega * omega;
        p.center0 = phi_c;
        return p;
    }
};

}  // namespace ringlens
