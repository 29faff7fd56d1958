#include "ringlens/gpe.hpp"

#include <algorithm>
#include <cmath>

#include <map>
#include <memory>
#include <mutex>

#include "ringlens/errors.hpp"
#include "ringlens/fft.hpp"
#include "ringlens/optimize.hpp"

namespace ringlens::gpe {

namespace {

/// Twiddle tables are expensive to rebuild every evolve/observe call;
/// cache one immutable plan per size.
const Fft& fft_for(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<Fft>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Fft>(n);
    return *slot;
}

double wrap_pi(double u) {
    double w = std::fmod(u + pi, two_pi);
    if (w < 0.0) w += two_pi;
    return w - pi;
}

int wavenumber(int index, int n) { return index < n / 2 ? index : index - n; }

struct EnergyTerms {
    double kinetic = 0.0, potential = 0.0, interaction = 0.0;
    double total() const { return kinetic + potential + interaction; }
};

EnergyTerms energy_terms(const WaveFunction& psi, const Fft& fft, const StagePotential* pot,
                         double t, double g1d, const PhysicalConstants& c) {
    const int n = psi.n();
    const double cell = psi.ring_radius * psi.dphi();
    const double kin_scale = c.hbar * c.hbar / (2.0 * c.atom_mass * psi.ring_radius * psi.ring_radius);

    EnergyTerms e;
    std::vector<std::complex<double>> spec(psi.amplitude);
    fft.forward(spec.data());
    // Parseval: sum_j |psi_j|^2 = (1/n) sum_k |c_k|^2 for unnormalized FFT.
    for (int p = 0; p < n; ++p) {
        const double k = wavenumber(p, n) + static_cast<double>(psi.carrier);
        e.kinetic += kin_scale * k * k * std::norm(spec[p]);
    }
    e.kinetic *= cell / n;

    for (int j = 0; j < n; ++j) {
        const double density = std::norm(psi.amplitude[j]);
        if (pot) e.potential += pot->value(two_pi * j / n, t) * density;
        e.interaction += 0.5 * g1d * density * density;
    }
    e.potential *= cell;
    e.interaction *= cell;
    return e;
}

}  // namespace

double WaveFunction::norm() const {
    double sum = 0.0;
    for (const auto& a : amplitude) sum += std::norm(a);
    return ring_radius * sum * dphi();
}

void WaveFunction::normalize() {
    const double current = norm();
    if (current <= 0.0) return;
    const double scale = std::sqrt(atom_number / current);
    for (auto& a : amplitude) a *= scale;
}

void rebase(WaveFunction& psi, long long new_carrier) {
    const long long shift = new_carrier - psi.carrier;
    if (shift == 0) return;
    const int n = psi.n();
    for (int j = 0; j < n; ++j) {
        const double phase = -static_cast<double>(shift) * (two_pi * j / n);
        psi.amplitude[j] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    psi.carrier = new_carrier;
}

long long carrier_for_rate(double angular_velocity, double ring_radius,
                           const PhysicalConstants& c) {
    return std::llround(angular_velocity * c.atom_mass * ring_radius * ring_radius / c.hbar);
}

double effective_g1d(double omega_perp, const PhysicalConstants& c) {
    return 2.0 * c.hbar * omega_perp * c.scattering_length;
}

WaveFunction ground_state(const StagePotential& trap, double atom_number, double ring_radius,
                          double g1d, const PhysicalConstants& c, const SolverParams& params) {
    const int n = params.grid_points;
    WaveFunction psi;
    psi.atom_number = atom_number;
    psi.ring_radius = ring_radius;
    psi.amplitude.resize(n);

    // Gaussian seed from the trap curvature at its center.
    const double curvature = trap.kind == StagePotential::Kind::cosine_well
                                 ? trap.depth
                                 : trap.curvature;  // J/rad^2 at the minimum
    if (!(curvature > 0.0))
        throw ConvergenceError("ground_state requires a confining trap (curvature > 0)");
    const double omega = std::sqrt(curvature / (c.atom_mass * ring_radius * ring_radius));
    const double sigma_phi =
        std::sqrt(c.hbar / (2.0 * c.atom_mass * omega)) / ring_radius;  // rms of |psi|^2
    for (int j = 0; j < n; ++j) {
        const double u = wrap_pi(two_pi * j / n - trap.center0);
        psi.amplitude[j] = std::exp(-u * u / (4.0 * sigma_phi * sigma_phi));
    }
    psi.normalize();

    const Fft& fft = fft_for(n);
    const double dtau = params.imag_time_step;

    // Gauge-shift the trap by its floor: the grown/decayed amplitudes are
    // renormalized every step, but a deeply negative well (the cosine tilt
    // well reaches -depth) would overflow the bare decay factors.
    double trap_floor = trap.value(0.0, 0.0);
    for (int j = 1; j < n; ++j)
        trap_floor = std::min(trap_floor, trap.value(two_pi * j / n, 0.0));
    const double kin_scale =
        c.hbar / (2.0 * c.atom_mass * ring_radius * ring_radius);  // rad/s per k^2
    std::vector<double> kinetic_decay(n);
    for (int p = 0; p < n; ++p) {
        const double k = wavenumber(p, n);
        kinetic_decay[p] = std::exp(-kin_scale * k * k * dtau);
    }

    // Two relaxation stages: a coarse step to approach the minimum, then
    // an eightfold finer one to strip the O(dtau^2) splitting bias.
    double energy = energy_terms(psi, fft, &trap, 0.0, g1d, c).total();
    int steps_left = params.max_imag_steps;
    for (double stage_dtau : {dtau, dtau / 8.0}) {
        for (int p = 0; p < n; ++p) {
            const double k = wavenumber(p, n);
            kinetic_decay[p] = std::exp(-kin_scale * k * k * stage_dtau);
        }
        bool converged = false;
        double best_energy = energy;
        int plateau = 0;
        while (!converged && steps_left-- > 0) {
            for (int j = 0; j < n; ++j) {
                const double v = trap.value(two_pi * j / n, 0.0) - trap_floor +
                                 g1d * std::norm(psi.amplitude[j]);
                psi.amplitude[j] *= std::exp(-0.5 * v * stage_dtau / c.hbar);
            }
            fft.forward(psi.amplitude.data());
            for (int p = 0; p < n; ++p) psi.amplitude[p] *= kinetic_decay[p];
            fft.inverse(psi.amplitude.data());
            for (int j = 0; j < n; ++j) {
                const double v = trap.value(two_pi * j / n, 0.0) - trap_floor +
                                 g1d * std::norm(psi.amplitude[j]);
                psi.amplitude[j] *= std::exp(-0.5 * v * stage_dtau / c.hbar);
            }
            psi.normalize();

            const double next = energy_terms(psi, fft, &trap, 0.0, g1d, c).total();
            const double change = std::abs(next - energy) / std::max(std::abs(next), 1e-300);
            energy = next;
            converged = change < params.imaginary_time_tolerance;
            // Plateau acceptance: under-resolved profiles chatter at the
            // truncation floor; no net descent over a long window means
            // the relaxation is done to grid precision.
            if (energy < best_energy - params.imaginary_time_tolerance * std::abs(best_energy)) {
                best_energy = energy;
                plateau = 0;
            } else if (++plateau > 400) {
                converged = true;
            }
        }
        if (!converged) throw ConvergenceError("imaginary-time propagation did not converge");
    }
    return psi;
}

void evolve(WaveFunction& psi, const StagePotential& pot, double t0, double duration, double dt,
            double g1d, const PhysicalConstants& c) {
    if (duration <= 0.0) return;
    const int n = psi.n();
    const Fft& fft = fft_for(n);

    const long n_steps = std::lround(std::ceil(duration / dt - 1e-9));
    const double h = duration / static_cast<double>(n_steps);

    const double kin_scale = c.hbar / (2.0 * c.atom_mass * psi.ring_radius * psi.ring_radius);
    std::vector<std::complex<double>> kinetic_phase(n);
    for (int p = 0; p < n; ++p) {
        const double k = wavenumber(p, n) + static_cast<double>(psi.carrier);
        const double a = -kin_scale * k * k * h;
        kinetic_phase[p] = {std::cos(a), std::sin(a)};
    }

    std::vector<double> grid_phi(n);
    for (int j = 0; j < n; ++j) grid_phi[j] = two_pi * j / n;

    const double phase_scale = -0.5 * h / c.hbar;
    for (long s = 0; s < n_steps; ++s) {
        // Potential frozen at the step midpoint; the interaction phase is
        // exact for each half step because the density is unchanged by a
        // pure phase multiplication.
        const double t_mid = t0 + (s + 0.5) * h;
        for (int j = 0; j < n; ++j) {
            const double v = pot.value(grid_phi[j], t_mid) + g1d * std::norm(psi.amplitude[j]);
            const double a = phase_scale * v;
            psi.amplitude[j] *= std::complex<double>(std::cos(a), std::sin(a));
        }
        fft.forward(psi.amplitude.data());
        for (int p = 0; p < n; ++p) psi.amplitude[p] *= kinetic_phase[p];
        fft.inverse(psi.amplitude.data());
        for (int j = 0; j < n; ++j) {
            const double v = pot.value(grid_phi[j], t_mid) + g1d * std::norm(psi.amplitude[j]);
            const double a = phase_scale * v;
            psi.amplitude[j] *= std::complex<double>(std::cos(a), std::sin(a));
        }
    }
}

Observables observe(const WaveFunction& psi, const StagePotential* pot, double t, double g1d,
                    const PhysicalConstants& c) {
    Observables out;
    const int n = psi.n();
    const double cell = psi.ring_radius * psi.dphi();
    const double total = psi.norm();

    // Circular mean of the density and the resultant length; the latter
    // detects a ring-filling cloud (no meaningful size or TF fit).
    double cs = 0.0, sn = 0.0;
    for (int j = 0; j < n; ++j) {
        const double density = std::norm(psi.amplitude[j]);
        cs += density * std::cos(two_pi * j / n);
        sn += density * std::sin(two_pi * j / n);
    }
    const double resultant = std::sqrt(cs * cs + sn * sn) * cell / total;
    out.com_angle = std::atan2(sn, cs);
    if (out.com_angle < 0.0) out.com_angle += two_pi;
    out.wrapped = resultant < 0.15;

    double var = 0.0;
    for (int j = 0; j < n; ++j) {
        const double u = wrap_pi(two_pi * j / n - out.com_angle);
        var += std::norm(psi.amplitude[j]) * u * u;
    }
    var *= cell / total;
    out.rms_width = psi.ring_radius * std::sqrt(var);

    // <angular velocity> = hbar <k + carrier> / (m R^2), spectral first moment.
    const Fft& fft = fft_for(n);
    std::vector<std::complex<double>> spec(psi.amplitude);
    fft.forward(spec.data());
    double k_mean = 0.0, weight = 0.0;
    for (int p = 0; p < n; ++p) {
        const double w = std::norm(spec[p]);
        k_mean += wavenumber(p, n) * w;
        weight += w;
    }
    k_mean = k_mean / weight + static_cast<double>(psi.carrier);
    out.com_velocity = c.hbar * k_mean / (c.atom_mass * psi.ring_radius * psi.ring_radius);

    const EnergyTerms e = energy_terms(psi, fft, pot, t, g1d, c);
    out.energy_kinetic = e.kinetic;
    out.energy_potential = e.potential;
    out.energy_interaction = e.interaction;
    out.energy_total = e.total();

    // Thomas-Fermi radius: least-squares inverted parabola on the central
    // 80% of the mass (the profile is invalid at the edges).
    if (!out.wrapped) {
        std::vector<double> u(n), density(n);
        for (int j = 0; j < n; ++j) {
            u[j] = wrap_pi(two_pi * j / n - out.com_angle);
            density[j] = std::norm(psi.amplitude[j]);
        }
        std::vector<int> order(n);
        for (int j = 0; j < n; ++j) order[j] = j;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return std::abs(u[a]) < std::abs(u[b]); });
        double mass = 0.0;
        const double target = 0.8 * total / cell;
        double window = 0.0;
        for (int idx : order) {
            mass += density[idx];
            window = std::abs(u[idx]);
            if (mass >= target) break;
        }
        window = std::max(window, 4.0 * psi.dphi());

        auto sse = [&](double w) {
            double num = 0.0, den = 0.0;
            for (int j = 0; j < n; ++j) {
                if (std::abs(u[j]) > window) continue;
                const double model = std::max(0.0, 1.0 - u[j] * u[j] / (w * w));
                num += density[j] * model;
                den += model * model;
            }
            const double amp = den > 0.0 ? num / den : 0.0;
            double err = 0.0;
            for (int j = 0; j < n; ++j) {
                if (std::abs(u[j]) > window) continue;
                const double model = amp * std::max(0.0, 1.0 - u[j] * u[j] / (w * w));
                err += (density[j] - model) * (density[j] - model);
            }
            return err;
        };
        const double w_seed = std::max(std::sqrt(5.0 * var), 4.0 * psi.dphi());
        const double w_best = golden_section_min(sse, 0.25 * w_seed, std::min(4.0 * w_seed, pi),
                                                 1e-5 * w_seed);
        out.tf_radius = psi.ring_radius * w_best;
        out.tf_fit_ok = true;
    }
    return out;
}

}  // namespace ringlens::gpe
