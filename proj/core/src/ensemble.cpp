#include "ringlens/ensemble.hpp"

#include <cmath>

#include "ringlens/rng.hpp"

namespace ringlens::ens {

namespace {

double wrap_2pi(double phi) {
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

}  // namespace

std::vector<double> ParticleEnsemble::wrapped_angles() const {
    std::vector<double> out(angle.size());
    for (std::size_t i = 0; i < angle.size(); ++i) out[i] = wrap_2pi(angle[i]);
    return out;
}

ParticleEnsemble sample_thermal(double temperature, double trap_omega, double trap_center,
                                std::size_t count, double ring_radius,
                                const PhysicalConstants& c, std::uint64_t seed) {
    ParticleEnsemble ens;
    ens.ring_radius = ring_radius;
    ens.angle.resize(count);
    ens.angular_velocity.resize(count);

    const double kt = c.k_boltzmann * temperature;
    const double sigma_phi = std::sqrt(kt / c.atom_mass) / (trap_omega * ring_radius);
    const double sigma_rate = std::sqrt(kt / c.atom_mass) / ring_radius;

    NormalSampler normal(seed);
    for (std::size_t i = 0; i < count; ++i) {
        ens.angle[i] = trap_center + sigma_phi * normal();
        ens.angular_velocity[i] = sigma_rate * normal();
    }
    return ens;
}

void step(ParticleEnsemble& ens, const StagePotential& pot, double t0, double duration, double dt,
          const PhysicalConstants& c) {
    if (duration <= 0.0) return;
    const std::size_t n = ens.size();

    if (pot.kind == StagePotential::Kind::free) {
        for (std::size_t i = 0; i < n; ++i) ens.angle[i] += ens.angular_velocity[i] * duration;
        return;
    }

    // Angular acceleration is -dV/dphi / (m R^2).
    const double inv_inertia = 1.0 / (c.atom_mass * ens.ring_radius * ens.ring_radius);
    const long n_steps = std::lround(std::ceil(duration / dt - 1e-9));
    const double h = duration / static_cast<double>(n_steps);

    std::vector<double> accel(n);
    for (std::size_t i = 0; i < n; ++i)
        accel[i] = -pot.dvalue_dphi(ens.angle[i], t0) * inv_inertia;

    double t = t0;
    for (long s = 0; s < n_steps; ++s) {
        const double t_next = t0 + (s + 1) * h;
        for (std::size_t i = 0; i < n; ++i) {
            const double v_half = ens.angular_velocity[i] + 0.5 * h * accel[i];
            const double x = ens.angle[i] + h * v_half;
            const double a = -pot.dvalue_dphi(x, t_next) * inv_inertia;
            ens.angle[i] = x;
            ens.angular_velocity[i] = v_half + 0.5 * h * a;
            accel[i] = a;
        }
        t = t_next;
    }
    (void)t;
}

void thin_kick(ParticleEnsemble& ens, double omega_lens, double tau, double phi_c) {
    if (omega_lens <= 0.0 || tau <= 0.0) return;
    const double theta = omega_lens * tau;
    const double ct = std::cos(theta), st = std::sin(theta);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const double u = ens.angle[i] - phi_c;
        const double v = ens.angular_velocity[i];
        ens.angle[i] = phi_c + u * ct + (v / omega_lens) * st;
        ens.angular_velocity[i] = -omega_lens * u * st + v * ct;
    }
}

CloudSize cloud_size(const ParticleEnsemble& ens) {
    CloudSize out;
    const std::size_t n = ens.size();
    if (n == 0) return out;

    double cs = 0.0, sn = 0.0, rate = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cs += std::cos(ens.angle[i]);
        sn += std::sin(ens.angle[i]);
        rate += ens.angular_velocity[i];
    }
    cs /= n;
    sn /= n;
    out.com = wrap_2pi(std::atan2(sn, cs));
    out.com_rate = rate / n;

    // Resultant length of the wrapped angles: near zero once the cloud
    // fills the ring, in which case an arc-length size is meaningless.
    const double resultant = std::sqrt(cs * cs + sn * sn);
    out.wrapped = resultant < 0.15;

    double mean = 0.0;
    for (double a : ens.angle) mean += a;
    mean /= n;
    double var = 0.0;
    for (double a : ens.angle) var += (a - mean) * (a - mean);
    var /= n;

    out.sigma = ens.ring_radius * std::sqrt(var);
    out.r_1e = std::sqrt(2.0) * out.sigma;
    return out;
}

}  // namespace ringlens::ens
