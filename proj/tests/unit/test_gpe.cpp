#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ringlens/constants.hpp"
#include "ringlens/errors.hpp"
#include "ringlens/gpe.hpp"

using namespace ringlens;

namespace {

const PhysicalConstants kC;
constexpr double kR = 485e-6;

SolverParams solver_defaults() {
    SolverParams s;
    s.grid_points = 2048;
    return s;
}

gpe::WaveFunction gaussian_state(int n, double atom_number, double sigma_phi, double center) {
    gpe::WaveFunction psi;
    psi.ring_radius = kR;
    psi.atom_number = atom_number;
    psi.amplitude.resize(n);
    for (int j = 0; j < n; ++j) {
        double u = two_pi * j / n - center;
        if (u > pi) u -= two_pi;
        if (u < -pi) u += two_pi;
        psi.amplitude[j] = std::exp(-u * u / (4.0 * sigma_phi * sigma_phi));
    }
    psi.normalize();
    return psi;
}

}  // namespace

TEST_SUITE_BEGIN("fast");

TEST_CASE("effective 1d coupling") {
    CHECK(gpe::effective_g1d(two_pi * 100.0, PhysicalConstants{.scattering_length = 0.0}) == 0.0);
    const double g = gpe::effective_g1d(two_pi * 100.0, kC);
    CHECK(gpe::effective_g1d(two_pi * 200.0, kC) == doctest::Approx(2.0 * g).epsilon(1e-15));

    // Golden value for the 87Rb defaults at omega_perp = 2 pi x 100 Hz,
    // cross-checked through h * f_perp * 2 a_s.
    CHECK(g == doctest::Approx(6.8911129606e-40).epsilon(1e-9));
    const double h = two_pi * kC.hbar;
    const double second_path = h * 100.0 * 2.0 * kC.scattering_length;
    CHECK(g == doctest::Approx(second_path).epsilon(1e-14));
}

TEST_CASE("norm accounting") {
    auto psi = gaussian_state(512, 2e4, 0.1, 0.0);
    CHECK(psi.norm() == doctest::Approx(2e4).epsilon(1e-10));
}

TEST_CASE("non-interacting harmonic ground state is the analytic gaussian") {
    const double omega = 42.4;
    const auto trap = StagePotential::harmonic_trap(omega, 0.0, kR, kC);
    SolverParams params = solver_defaults();
    const auto psi = gpe::ground_state(trap, 1e4, kR, 0.0, kC, params);
    const auto obs = gpe::observe(psi, &trap, 0.0, 0.0, kC);

    const double sigma_expected = std::sqrt(kC.hbar / (2.0 * kC.atom_mass * omega));
    CHECK(obs.rms_width == doctest::Approx(sigma_expected).epsilon(0.005));
    CHECK(obs.energy_total ==
          doctest::Approx(0.5 * kC.hbar * omega * 1e4).epsilon(0.005));
    CHECK(obs.energy_total ==
          doctest::Approx(obs.energy_kinetic + obs.energy_potential + obs.energy_interaction)
              .epsilon(1e-8));
}

TEST_CASE("strongly interacting ground state matches thomas-fermi") {
    // Parameters chosen so the healing length spans two grid cells while
    // the TF radius is thirty times larger: deep TF regime and resolved.
    const double omega = 11.0;
    const auto trap = StagePotential::harmonic_trap(omega, 0.0, kR, kC);
    SolverParams params = solver_defaults();
    params.grid_points = 4096;
    params.imag_time_step = 3e-4;
    const double g1d = gpe::effective_g1d(two_pi * 100.0, kC);
    const double atom_number = 1500;
    const auto psi = gpe::ground_state(trap, atom_number, kR, g1d, kC, params);

    // Analytic TF oracle: mu from N g = 4/3 mu x0, x0 = sqrt(2 mu / m w^2).
    const double mu = std::pow(0.75 * atom_number * g1d *
                                   std::sqrt(kC.atom_mass * omega * omega / 2.0),
                               2.0 / 3.0);
    const double x_tf = std::sqrt(2.0 * mu / (kC.atom_mass * omega * omega));

    const int n = psi.n();
    double err2 = 0.0, norm2 = 0.0;
    for (int j = 0; j < n; ++j) {
        double u = two_pi * j / n;
        if (u > pi) u -= two_pi;
        const double x = kR * u;
        if (std::abs(x) > 0.85 * x_tf) continue;  // away from the TF edges
        const double analytic = (mu - 0.5 * kC.atom_mass * omega * omega * x * x) / g1d;
        const double numeric = std::norm(psi.amplitude[j]);
        err2 += (numeric - analytic) * (numeric - analytic);
        norm2 += analytic * analytic;
    }
    CHECK(std::sqrt(err2 / norm2) < 0.02);

    const auto obs = gpe::observe(psi, &trap, 0.0, g1d, kC);
    CHECK(obs.tf_fit_ok);
    CHECK(obs.tf_radius == doctest::Approx(x_tf).epsilon(0.03));
}

TEST_CASE("zero-duration evolution is the identity") {
    auto psi = gaussian_state(512, 1e4, 0.05, 1.0);
    const auto before = psi.amplitude;
    gpe::evolve(psi, StagePotential::free_guide(), 0.0, 0.0, 1e-5, 0.0, kC);
    CHECK(psi.amplitude == before);
}

TEST_CASE("free gaussian dispersion follows the analytic width") {
    const double sigma0 = 10e-6 / kR;  // 10 um arc width in angle
    auto psi = gaussian_state(2048, 1e4, sigma0, 0.0);

    const double duration = 0.050;
    gpe::evolve(psi, StagePotential::free_guide(), 0.0, duration, 1e-5, 0.0, kC);
    const auto obs = gpe::observe(psi, nullptr, 0.0, 0.0, kC);

    // sigma(t) = sigma0 sqrt(1 + (hbar t / (2 m sigma0^2))^2) for the rms
    // width of |psi|^2 with initial rms sigma0.
    const double s0 = kR * sigma0;
    const double rate = kC.hbar * duration / (2.0 * kC.atom_mass * s0 * s0);
    const double expected = s0 * std::sqrt(1.0 + rate * rate);
    CHECK(obs.rms_width == doctest::Approx(expected).epsilon(0.005));
}

TEST_CASE("displaced ground state oscillates at the trap frequency") {
    const double omega = 42.4;
    const double center = 1.0;
    const auto trap = StagePotential::harmonic_trap(omega, center, kR, kC);
    SolverParams params = solver_defaults();
    params.grid_points = 2048;
    const double g1d = gpe::effective_g1d(two_pi * 100.0, kC);
    auto psi = gpe::ground_state(trap, 1e4, kR, g1d, kC, params);

    // displace by a few cells: the sloshing momentum ~ m R^2 w disp / hbar
    // must stay well inside the spectral band
    const int shift = 7;
    std::rotate(psi.amplitude.begin(), psi.amplitude.end() - shift, psi.amplitude.end());

    // Kohn mode: the com oscillates at exactly the trap frequency however
    // strong the interactions. Measure the period between two downward
    // zero crossings of the displacement (linear there, so precise).
    auto displacement = [&] {
        double cs = 0.0, sn = 0.0;
        for (int j = 0; j < psi.n(); ++j) {
            const double density = std::norm(psi.amplitude[j]);
            cs += density * std::cos(two_pi * j / psi.n());
            sn += density * std::sin(two_pi * j / psi.n());
        }
        return StagePotential::wrap_pi(std::atan2(sn, cs) - center);
    };

    const double period = two_pi / omega;
    const double dt = 1e-5;
    double t = 0.0;
    double prev = displacement();
    std::vector<double> crossings;
    while (t < 1.4 * period && crossings.size() < 2) {
        gpe::evolve(psi, trap, t, dt, dt, g1d, kC);
        t += dt;
        const double cur = displacement();
        if (prev > 0.0 && cur <= 0.0)
            crossings.push_back(t - dt + dt * prev / (prev - cur));
        prev = cur;
    }
    REQUIRE(crossings.size() == 2);
    CHECK(crossings[1] - crossings[0] == doctest::Approx(period).epsilon(0.001));
}

TEST_CASE("norm and energy conservation in a static trap") {
    const double omega = 42.4;
    const auto trap = StagePotential::harmonic_trap(omega, 0.3, kR, kC);
    SolverParams params = solver_defaults();
    params.grid_points = 2048;
    const double g1d = gpe::effective_g1d(two_pi * 100.0, kC);
    auto psi = gpe::ground_state(trap, 1e4, kR, g1d, kC, params);
    // displaced so the evolution is nontrivial
    std::rotate(psi.amplitude.begin(), psi.amplitude.end() - 7, psi.amplitude.end());

    const double norm0 = psi.norm();
    const double e0 = gpe::observe(psi, &trap, 0.0, g1d, kC).energy_total;

    const double dt = 1e-5;
    const long steps = 10000;  // 100 ms
    gpe::evolve(psi, trap, 0.0, steps * dt, dt, g1d, kC);

    const double norm_drift = std::abs(psi.norm() - norm0) / norm0;
    CHECK(norm_drift < 1e-10 * steps);

    const double e1 = gpe::observe(psi, &trap, 0.0, g1d, kC).energy_total;
    CHECK(std::abs(e1 - e0) < 1e-6 * std::abs(e0));
}

TEST_CASE("time reversal returns the initial state") {
    const auto trap = StagePotential::harmonic_trap(42.4, 0.0, kR, kC);
    SolverParams params = solver_defaults();
    params.grid_points = 2048;
    const double g1d = gpe::effective_g1d(two_pi * 100.0, kC);
    auto psi = gpe::ground_state(trap, 1e4, kR, g1d, kC, params);
    std::rotate(psi.amplitude.begin(), psi.amplitude.end() - 7, psi.amplitude.end());
    const auto initial = psi.amplitude;

    gpe::evolve(psi, trap, 0.0, 0.02, 1e-5, g1d, kC);
    for (auto& a : psi.amplitude) a = std::conj(a);
    gpe::evolve(psi, trap, 0.0, 0.02, 1e-5, g1d, kC);
    for (auto& a : psi.amplitude) a = std::conj(a);

    double err2 = 0.0;
    for (int j = 0; j < psi.n(); ++j) err2 += std::norm(psi.amplitude[j] - initial[j]);
    err2 = std::sqrt(err2 * psi.ring_radius * psi.dphi() / psi.atom_number);
    CHECK(err2 < 1e-6);
}

TEST_CASE("integer-winding boost shifts the com velocity galilean-style") {
    // The freely expanding interacting cloud develops velocity spreads of
    // ~1400 spectral units, so this runs on the 4096 default grid.
    SolverParams params = solver_defaults();
    params.grid_points = 4096;
    const double g1d = gpe::effective_g1d(two_pi * 100.0, kC);
    const auto trap = StagePotential::harmonic_trap(42.4, 0.0, kR, kC);
    auto rest = gpe::ground_state(trap, 1e4, kR, g1d, kC, params);

    const int winding = 30;
    auto moving = rest;
    for (int j = 0; j < moving.n(); ++j) {
        const double phase = winding * (two_pi * j / moving.n());
        moving.amplitude[j] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }

    const double expected_rate = kC.hbar * winding / (kC.atom_mass * kR * kR);
    const auto obs = gpe::observe(moving, nullptr, 0.0, g1d, kC);
    CHECK(obs.com_velocity == doctest::Approx(expected_rate).epsilon(1e-10));

    // Densities agree in the co-moving frame after free evolution. The
    // duration is chosen so the boost drift is an exact number of cells.
    const int drift_cells = 2;
    const double duration = drift_cells * rest.dphi() / expected_rate;
    gpe::evolve(rest, StagePotential::free_guide(), 0.0, duration, 1e-5, g1d, kC);
    gpe::evolve(moving, StagePotential::free_guide(), 0.0, duration, 1e-5, g1d, kC);

    const int n = rest.n();
    double worst = 0.0, scale = 0.0;
    for (int j = 0; j < n; ++j) {
        const double a = std::norm(rest.amplitude[j]);
        const double b = std::norm(moving.amplitude[(j + drift_cells) % n]);
        worst = std::max(worst, std::abs(a - b));
        scale = std::max(scale, a);
    }
    CHECK(worst < 1e-4 * scale);
}

TEST_CASE("carrier rebasing is exact and the envelope evolves identically") {
    SolverParams params = solver_defaults();
    params.grid_points = 1024;
    const double g1d = gpe::effective_g1d(two_pi * 100.0, kC);
    const auto trap = StagePotential::harmonic_trap(42.4, 0.0, kR, kC);
    auto psi = gpe::ground_state(trap, 1e4, kR, g1d, kC, params);

    // A huge carrier (launched-cloud scale) must change the com velocity
    // exactly and leave the trapped density dynamics untouched.
    auto moving = psi;
    const long long w = gpe::carrier_for_rate(63.918, kR, kC);
    gpe::rebase(moving, 0);  // no-op at carrier 0
    moving.carrier = w;      // relabel: same envelope, carrier frame w

    const auto obs_rest = gpe::observe(psi, nullptr, 0.0, g1d, kC);
    const auto obs_moving = gpe::observe(moving, nullptr, 0.0, g1d, kC);
    const double rate_w = kC.hbar * w / (kC.atom_mass * kR * kR);
    CHECK(obs_moving.com_velocity - obs_rest.com_velocity ==
          doctest::Approx(rate_w).epsilon(1e-12));

    // Co-moving trap: identical densities after identical local evolution.
    auto co_trap = trap;
    co_trap.center_rate = rate_w;
    gpe::evolve(psi, trap, 0.0, 0.01, 1e-5, g1d, kC);
    // In the moving frame the same trap co-moves; evolve then rebase back.
    gpe::evolve(moving, co_trap, 0.0, 0.01, 1e-5, g1d, kC);

    // Compare density profiles about their own centers of mass.
    const auto o1 = gpe::observe(psi, nullptr, 0.0, g1d, kC);
    const auto o2 = gpe::observe(moving, nullptr, 0.0, g1d, kC);
    CHECK(o2.rms_width == doctest::Approx(o1.rms_width).epsilon(1e-3));
}

TEST_CASE("observe handles the uniform ring") {
    gpe::WaveFunction psi;
    psi.ring_radius = kR;
    psi.atom_number = 1e4;
    psi.amplitude.assign(512, {1.0, 0.0});
    psi.normalize();
    const auto obs = gpe::observe(psi, nullptr, 0.0, 0.0, kC);
    CHECK(obs.wrapped);
    CHECK(!obs.tf_fit_ok);
    CHECK(obs.rms_width == doctest::Approx(kR * pi / std::sqrt(3.0)).epsilon(1e-4));
}

TEST_CASE("observe recovers an injected thomas-fermi radius") {
    gpe::WaveFunction psi;
    psi.ring_radius = kR;
    psi.atom_number = 1e4;
    const int n = 2048;
    psi.amplitude.resize(n);
    const double w = 0.45;  // rad
    for (int j = 0; j < n; ++j) {
        double u = two_pi * j / n - 2.0;
        if (u > pi) u -= two_pi;
        if (u < -pi) u += two_pi;
        psi.amplitude[j] = std::sqrt(std::max(0.0, 1.0 - u * u / (w * w)));
    }
    psi.normalize();
    const auto obs = gpe::observe(psi, nullptr, 0.0, 0.0, kC);
    CHECK(obs.tf_fit_ok);
    CHECK(obs.tf_radius == doctest::Approx(kR * w).epsilon(0.001));
    CHECK(obs.com_angle == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("slow");

TEST_CASE("grid refinement leaves the ground-state energy unchanged") {
    // Resolved interacting scenario (healing length = two cells at 4096).
    const double omega = 11.0;
    const auto trap = StagePotential::harmonic_trap(omega, 0.0, kR, kC);
    SolverParams params = solver_defaults();
    params.imag_time_step = 3e-4;
    const double g1d = gpe::effective_g1d(two_pi * 100.0, kC);
    params.grid_points = 4096;
    const auto coarse = gpe::ground_state(trap, 1500, kR, g1d, kC, params);
    params.grid_points = 8192;
    const auto fine = gpe::ground_state(trap, 1500, kR, g1d, kC, params);
    const double e_coarse = gpe::observe(coarse, &trap, 0.0, g1d, kC).energy_total;
    const double e_fine = gpe::observe(fine, &trap, 0.0, g1d, kC).energy_total;
    CHECK(std::abs(e_fine - e_coarse) < 1e-6 * std::abs(e_fine));
}

TEST_SUITE_END();
