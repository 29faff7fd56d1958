#include "ringlens/taap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ringlens/errors.hpp"
#include "ringlens/optimize.hpp"

namespace ringlens::taap {

Vec3 quadrupole_field(const Vec3& p, double gradient) {
    return {gradient * p.x, gradient * p.y, -2.0 * gradient * p.z};
}

double dressed_potential(const Vec3& p, const TaapConfig& taap, const PhysicalConstants& c,
                         double audio_phase, const CouplingModel& coupling) {
    Vec3 b = quadrupole_field(p, taap.quadrupole_gradient);
    b.z += taap.audio_amplitude * std::sin(audio_phase);
    const double b_mag = std::sqrt(b.x * b.x + b.y * b.y + b.z * b.z);
    if (b_mag == 0.0)
        throw DegenerateFieldError("zero magnetic field at evaluation point: "
                                   "adiabatic potential undefined");
    const double detuning = taap.dressed_moment * b_mag / c.hbar - taap.rf_frequency;
    const double rabi = coupling ? coupling(p) : taap.rabi_frequency;

    // Gravity rotated by the tilt; phi_c is the downhill azimuth, so the
    // low point of the ring sits at phi = tilt_azimuth.
    const double gravity = c.atom_mass * c.gravity *
                           (p.z * std::cos(taap.tilt) -
                            std::sin(taap.tilt) * (p.x * std::cos(taap.tilt_azimuth) +
                                                   p.y * std::sin(taap.tilt_azimuth)));
    return c.hbar * std::sqrt(detuning * detuning + rabi * rabi) + gravity;
}

double taap_potential(const Vec3& p, const TaapConfig& taap, const PhysicalConstants& c,
                      int quadrature_nodes) {
    // Midpoint rule over one audio period; the gravity term is phase
    // independent and therefore enters exactly once.
    double sum = 0.0;
    for (int k = 0; k < quadrature_nodes; ++k) {
        const double phase = two_pi * (k + 0.5) / quadrature_nodes;
        sum += dressed_potential(p, taap, c, phase);
    }
    return sum / quadrature_nodes;
}

namespace {

TaapConfig untilted(TaapConfig taap) {
    taap.tilt = 0.0;
    taap.tilt_azimuth = 0.0;
    return taap;
}

double resonance_field(const TaapConfig& taap, const PhysicalConstants& c) {
    return c.hbar * taap.rf_frequency / taap.dressed_moment;  // T
}

double shell_radius(const TaapConfig& taap, const PhysicalConstants& c) {
    return resonance_field(taap, c) / taap.quadrupole_gradient;  // m
}

/// Minimum of V(rho, z) by coordinate descent with golden sections,
/// starting from the best node of a coarse grid.
RingLocation locate_minimum(const TaapConfig& taap, const PhysicalConstants& c, double rho_lo,
                            double rho_hi, double z_lo, double z_hi, double phi) {
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    auto V = [&](double rho, double z) {
        return taap_potential({rho * cphi, rho * sphi, z}, taap, c);
    };

    constexpr int kGrid = 61;
    double best = std::numeric_limits<double>::infinity();
    double rho = rho_lo, z = 0.5 * (z_lo + z_hi);
    for (int i = 0; i < kGrid; ++i) {
        const double r = rho_lo + (rho_hi - rho_lo) * i / (kGrid - 1);
        for (int j = 0; j < kGrid; ++j) {
            const double zz = z_lo + (z_hi - z_lo) * j / (kGrid - 1);
            const double v = V(r, zz);
            if (v < best) {
                best = v;
                rho = r;
                z = zz;
            }
        }
    }

    double dr = (rho_hi - rho_lo) / (kGrid - 1);
    double dz = (z_hi - z_lo) / (kGrid - 1);
    for (int round = 0; round < 8; ++round) {
        rho = golden_section_min([&](double r) { return V(r, z); }, std::max(rho - dr, 0.0),
                                 rho + dr, dr * 1e-7);
        z = golden_section_min([&](double zz) { return V(rho, zz); }, z - dz, z + dz, dz * 1e-7);
        dr *= 0.25;
        dz *= 0.25;
    }
    return {rho, z, V(rho, z)};
}

}  // namespace

RingLocation ring_minimum(const TaapConfig& taap_in, const PhysicalConstants& c) {
    const TaapConfig taap = untilted(taap_in);
    const double rho0 = shell_radius(taap, c);
    RingLocation loc =
        locate_minimum(taap, c, 0.01 * rho0, 1.8 * rho0, -0.9 * rho0, 0.9 * rho0, 0.0);
    if (loc.radius < 0.05 * rho0)
        throw CalibrationError("no ring minimum: potential minimum sits on the axis "
                               "(audio amplitude too small for a ring)");
    return loc;
}

TaapConfig calibrate_ring(double target_radius, TaapConfig taap, const PhysicalConstants& c) {
    if (!(target_radius > 0.0)) throw CalibrationError("target radius must be positive");
    const double tol = 1e-3 * target_radius;

    auto radius_for = [&](const TaapConfig& t) { return ring_minimum(t, c).radius; };

    // Keep the audio amplitude in the band where the ring exists.
    {
        const double f = taap.audio_amplitude / resonance_field(taap, c);
        if (!(f > 0.35 && f < 1.8)) taap.audio_amplitude = resonance_field(taap, c);
    }

    // Coarse stage: the ring radius scales almost linearly with the RF
    // frequency at a fixed B_m / B_res fraction.
    double radius = radius_for(taap);
    for (int i = 0; i < 12 && std::abs(radius - target_radius) > 0.04 * target_radius; ++i) {
        const double scale = target_radius / radius;
        taap.rf_frequency *= scale;
        taap.audio_amplitude *= scale;
        radius = radius_for(taap);
    }
    if (std::abs(radius - target_radius) > 0.2 * target_radius)
        throw CalibrationError("rf-frequency scaling failed to approach the target radius");

    if (std::abs(radius - target_radius) <= tol) return taap;

    // Fine stage: Illinois false-position on B_m; radius is monotonically
    // decreasing in the audio amplitude within the ring band.
    double b1 = taap.audio_amplitude;
    double f1 = radius - target_radius;
    double b0 = f1 > 0.0 ? b1 * 1.05 : b1 * 0.95;
    auto eval = [&](double bm) {
        TaapConfig t = taap;
        t.audio_amplitude = bm;
        return radius_for(t) - target_radius;
    };
    double f0 = eval(b0);

    // Expand until the bracket straddles the root.
    for (int i = 0; i < 24 && f0 * f1 > 0.0; ++i) {
        if (f0 > 0.0) {  // radius still too large: raise the amplitude
            b1 = b0;
            f1 = f0;
            b0 *= 1.08;
        } else {
            b1 = b0;
            f1 = f0;
            b0 *= 0.92;
        }
        f0 = eval(b0);
    }
    if (f0 * f1 > 0.0) throw CalibrationError("could not bracket the target ring radius in B_m");

    double fa = f0, fb = f1, a = b0, b = b1;
    for (int i = 0; i < 80; ++i) {
        const double mid = (a * fb - b * fa) / (fb - fa);
        const double fm = eval(mid);
        if (std::abs(fm) <= tol) {
            taap.audio_amplitude = mid;
            return taap;
        }
        if (fm * fa < 0.0) {
            b = mid;
            fb = fm;
            fa *= 0.5;  // Illinois damping
        } else {
            a = mid;
            fa = fm;
            fb *= 0.5;
        }
        if (std::abs(b - a) < 1e-12 * std::max(std::abs(a), std::abs(b))) break;
    }
    throw CalibrationError("audio-amplitude root finding did not converge");
}

namespace {

double radial_curvature(const TaapConfig& taap, const PhysicalConstants& c, double rho, double z,
                        double h) {
    auto V = [&](double r) { return taap_potential({r, 0.0, z}, taap, c); };
    // 5-point stencil, O(h^4)
    return (-V(rho + 2 * h) + 16 * V(rho + h) - 30 * V(rho) + 16 * V(rho - h) - V(rho - 2 * h)) /
           (12.0 * h * h);
}

double vertical_curvature(const TaapConfig& taap, const PhysicalConstants& c, double rho, double z,
                          double h) {
    auto V = [&](double zz) { return taap_potential({rho, 0.0, zz}, taap, c); };
    return (-V(z + 2 * h) + 16 * V(z + h) - 30 * V(z) + 16 * V(z - h) - V(z - 2 * h)) /
           (12.0 * h * h);
}

}  // namespace

RingGuide1D reduce_to_guide(const TaapConfig& taap, const PhysicalConstants& c,
                            int azimuthal_samples) {
    const RingLocation ring = ring_minimum(taap, c);

    RingGuide1D guide;
    guide.radius = ring.radius;
    guide.z0 = ring.z0;

    const double h = std::max(1e-8, 2e-4 * ring.radius);
    const TaapConfig flat = untilted(taap);
    guide.omega_perp =
        std::sqrt(std::max(0.0, radial_curvature(flat, c, ring.radius, ring.z0, h)) / c.atom_mass);
    guide.omega_vertical =
        std::sqrt(std::max(0.0, vertical_curvature(flat, c, ring.radius, ring.z0, h)) /
                  c.atom_mass);

    // Azimuthal profile: track the local transverse minimum around the
    // ring (it shifts slightly once tilted) and record its potential.
    guide.azimuthal_potential.resize(azimuthal_samples);
    const double span = 0.12 * ring.radius;
    for (int j = 0; j < azimuthal_samples; ++j) {
        const double phi = two_pi * j / azimuthal_samples;
        const RingLocation local =
            locate_minimum(taap, c, ring.radius - span, ring.radius + span, ring.z0 - span,
                           ring.z0 + span, phi);
        guide.azimuthal_potential[j] = local.potential;
    }
    return guide;
}

double lens_potential(double phi, double delta, double phi_c, double ring_radius,
                      const PhysicalConstants& c) {
    return -c.atom_mass * c.gravity * ring_radius * std::sin(delta) * std::cos(phi - phi_c);
}

double lens_frequency(double delta, double ring_radius, const PhysicalConstants& c) {
    return std::sqrt(c.gravity * std::sin(std::abs(delta)) / ring_radius);
}

double delta_for_frequency(double omega, double ring_radius, const PhysicalConstants& c) {
    return std::asin(omega * omega * ring_radius / c.gravity);
}

}  // namespace ringlens::taap
