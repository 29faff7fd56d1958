#include <doctest.h>

#include <cmath>

#include "ringlens/errors.hpp"
#include "ringlens/rng.hpp"
#include "ringlens/taap.hpp"

using namespace ringlens;
using taap::Vec3;

namespace {
const PhysicalConstants kC;
}

TEST_SUITE_BEGIN("fast");

TEST_CASE("quadrupole field form") {
    const Vec3 zero = taap::quadrupole_field({0, 0, 0}, 0.9);
    CHECK(zero.x == 0.0);
    CHECK(zero.y == 0.0);
    CHECK(zero.z == 0.0);

    const Vec3 b = taap::quadrupole_field({1e-4, 0, 0}, 1.0);
    CHECK(b.x == doctest::Approx(1e-4));
    CHECK(b.y == 0.0);
    CHECK(b.z == 0.0);

    NormalSampler normal(5);
    for (int i = 0; i < 20; ++i) {
        const double z = 1e-4 * normal();
        const Vec3 f = taap::quadrupole_field({0, 0, z}, 0.9);
        const double mag = std::sqrt(f.x * f.x + f.y * f.y + f.z * f.z);
        CHECK(mag == doctest::Approx(2.0 * 0.9 * std::abs(z)));
    }
}

TEST_CASE("dressed potential on the resonance shell is hbar Omega0") {
    TaapConfig taap;
    // audio phase 0: the bias term vanishes, leaving the bare quadrupole.
    const double rho_res = kC.hbar * taap.rf_frequency / (taap.dressed_moment *
                                                          taap.quadrupole_gradient);
    const double v = taap::dressed_potential({rho_res, 0, 0}, taap, kC, 0.0);
    CHECK(v == doctest::Approx(kC.hbar * taap.rabi_frequency).epsilon(1e-12));
}

TEST_CASE("dressed potential approaches hbar |detuning| as the coupling vanishes") {
    TaapConfig taap;
    taap.rabi_frequency = 1e-6;  // rad/s, negligible against the detuning
    const double rho = 1.3 * kC.hbar * taap.rf_frequency /
                       (taap.dressed_moment * taap.quadrupole_gradient);
    const double b_mag = taap.quadrupole_gradient * rho;
    const double detuning = taap.dressed_moment * b_mag / kC.hbar - taap.rf_frequency;
    const double v = taap::dressed_potential({rho, 0, 0}, taap, kC, 0.0);
    CHECK(v == doctest::Approx(kC.hbar * std::abs(detuning)).epsilon(1e-9));
}

TEST_CASE("degenerate field point raises") {
    TaapConfig taap;
    CHECK_THROWS_AS((void)taap::dressed_potential({0, 0, 0}, taap, kC, 0.0),
                    DegenerateFieldError);
    // With the audio bias on, the zero of the field moves up the z axis.
    const double z_zero = taap.audio_amplitude * std::sin(1.0) / (2.0 * taap.quadrupole_gradient);
    CHECK_THROWS_AS((void)taap::dressed_potential({0, 0, z_zero}, taap, kC, 1.0),
                    DegenerateFieldError);
}

TEST_CASE("pluggable coupling model") {
    TaapConfig taap;
    const Vec3 p{2e-4, 0, 1e-5};
    const double constant = taap::dressed_potential(p, taap, kC, 0.3);
    const double doubled = taap::dressed_potential(
        p, taap, kC, 0.3, [&](const Vec3&) { return 2.0 * taap.rabi_frequency; });
    CHECK(doubled > constant);
}

TEST_CASE("zero audio amplitude makes the average equal any instant") {
    TaapConfig taap;
    taap.audio_amplitude = 0.0;
    const Vec3 p{2.1e-4, 0.3e-4, -0.2e-4};
    const double avg = taap::taap_potential(p, taap, kC);
    CHECK(avg == doctest::Approx(taap::dressed_potential(p, taap, kC, 0.77)).epsilon(1e-13));
}

TEST_CASE("untilted average is rotation invariant") {
    TaapConfig taap;
    NormalSampler normal(17);
    for (int i = 0; i < 15; ++i) {
        const double rho = 1.5e-4 + 1e-4 * normal.uniform();
        const double z = 4e-5 * (normal.uniform() - 0.5);
        const double phi1 = two_pi * normal.uniform();
        const double phi2 = two_pi * normal.uniform();
        const double v1 =
            taap::taap_potential({rho * std::cos(phi1), rho * std::sin(phi1), z}, taap, kC);
        const double v2 =
            taap::taap_potential({rho * std::cos(phi2), rho * std::sin(phi2), z}, taap, kC);
        CHECK(v1 == doctest::Approx(v2).epsilon(1e-12));
    }
}

TEST_CASE("quadrature is converged at the default node count") {
    TaapConfig taap;
    NormalSampler normal(23);
    for (int i = 0; i < 100; ++i) {
        const double rho = 0.8e-4 + 2.5e-4 * normal.uniform();
        const double z = 1.2e-4 * (normal.uniform() - 0.5);
        const double phi = two_pi * normal.uniform();
        const Vec3 p{rho * std::cos(phi), rho * std::sin(phi), z};
        const double coarse = taap::taap_potential(p, taap, kC, taap::kAudioQuadratureNodes);
        const double fine = taap::taap_potential(p, taap, kC, 2 * taap::kAudioQuadratureNodes);
        CHECK(std::abs(fine - coarse) <= 1e-6 * std::abs(fine));
    }
}

TEST_CASE("lens potential closed form") {
    SUBCASE("no tilt, no lens") {
        for (double phi : {0.0, 1.0, 3.0, 6.0})
            CHECK(taap::lens_potential(phi, 0.0, 0.5, 485e-6, kC) == 0.0);
    }
    SUBCASE("maximum opposite the downhill azimuth") {
        const double phi_c = 0.7;
        const double at_min = taap::lens_potential(phi_c, 0.07, phi_c, 485e-6, kC);
        const double at_max = taap::lens_potential(phi_c + pi, 0.07, phi_c, 485e-6, kC);
        CHECK(at_min < 0.0);
        CHECK(at_max > 0.0);
        CHECK(at_max == doctest::Approx(-at_min));
        for (double phi = 0.0; phi < two_pi; phi += 0.37)
            CHECK(taap::lens_potential(phi, 0.07, phi_c, 485e-6, kC) <= at_max + 1e-40);
    }
    SUBCASE("curvature frequency at 70 mrad") {
        const double R = 485e-6;
        const double h = 1e-4;  // rad
        const double v0 = taap::lens_potential(0.0, 0.070, 0.0, R, kC);
        const double vp = taap::lens_potential(h, 0.070, 0.0, R, kC);
        const double vm = taap::lens_potential(-h, 0.070, 0.0, R, kC);
        const double curvature = (vp - 2.0 * v0 + vm) / (h * h);  // J/rad^2
        const double omega = std::sqrt(curvature / (kC.atom_mass * R * R));
        CHECK(omega == doctest::Approx(std::sqrt(kC.gravity * std::sin(0.070) / R)).epsilon(1e-6));
        CHECK(omega == doctest::Approx(37.6).epsilon(0.01));
    }
    SUBCASE("frequency-tilt inverse pair") {
        const double R = 485e-6;
        for (double delta : {0.01, 0.05, 0.089, 0.15}) {
            const double omega = taap::lens_frequency(delta, R, kC);
            CHECK(taap::delta_for_frequency(omega, R, kC) == doctest::Approx(delta).epsilon(1e-12));
        }
        CHECK(taap::lens_frequency(0.089, R, kC) == doctest::Approx(42.4).epsilon(0.01));
    }
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("slow");

namespace {

TaapConfig calibrated() {
    static const TaapConfig config = taap::calibrate_ring(485e-6, TaapConfig{}, kC);
    return config;
}

}  // namespace

TEST_CASE("calibration pins the ring radius") {
    const TaapConfig config = calibrated();
    const auto ring = taap::ring_minimum(config, kC);
    CHECK(std::abs(ring.radius - 485e-6) < 0.5e-6);

    SUBCASE("idempotent") {
        const TaapConfig again = taap::calibrate_ring(485e-6, config, kC);
        const auto ring2 = taap::ring_minimum(again, kC);
        CHECK(std::abs(ring2.radius - 485e-6) < 0.5e-6);
        CHECK(again.audio_amplitude ==
              doctest::Approx(config.audio_amplitude).epsilon(2e-3));
        CHECK(again.rf_frequency == doctest::Approx(config.rf_frequency).epsilon(1e-12));
    }
}

TEST_CASE("untilted guide is azimuthally flat") {
    const auto guide = taap::reduce_to_guide(calibrated(), kC, 128);
    double mean = 0.0;
    for (double v : guide.azimuthal_potential) mean += v;
    mean /= guide.azimuthal_potential.size();
    double worst = 0.0;
    for (double v : guide.azimuthal_potential) worst = std::max(worst, std::abs(v - mean));
    const double bound = 1e-3 * kC.atom_mass * kC.gravity * guide.radius;
    CHECK(worst < bound);
}

TEST_CASE("tilted guide curvature matches the pendulum frequency") {
    TaapConfig config = calibrated();
    config.tilt = 0.089;
    config.tilt_azimuth = 0.0;
    const auto guide = taap::reduce_to_guide(config, kC, 256);
    const auto& v = guide.azimuthal_potential;
    const int n = static_cast<int>(v.size());

    // unique minimum at the tilt azimuth
    int j_min = 0;
    for (int j = 1; j < n; ++j)
        if (v[j] < v[j_min]) j_min = j;
    CHECK(std::min(j_min, n - j_min) <= 2);

    const double h = two_pi / n;
    const double curvature =
        (v[(j_min + 1) % n] - 2.0 * v[j_min] + v[(j_min + n - 1) % n]) / (h * h);
    const double omega = std::sqrt(curvature / (kC.atom_mass * guide.radius * guide.radius));
    CHECK(omega == doctest::Approx(42.4).epsilon(0.01));
}

TEST_CASE("closed-form lens agrees with the reduced tilted guide") {
    TaapConfig tilted = calibrated();
    tilted.tilt = 0.089;
    tilted.tilt_azimuth = 0.0;
    const int n = 256;
    const auto flat = taap::reduce_to_guide(calibrated(), kC, n);
    const auto guide = taap::reduce_to_guide(tilted, kC, n);
    const double amplitude =
        kC.atom_mass * kC.gravity * guide.radius * std::sin(tilted.tilt);

    for (int j = 0; j < n; ++j) {
        const double phi = two_pi * j / n;
        double u = phi;  // offset from the tilt azimuth (0)
        if (u > pi) u -= two_pi;
        if (std::abs(u) > 0.5) continue;
        const double from_guide = guide.azimuthal_potential[j] - flat.azimuthal_potential[j];
        const double closed = taap::lens_potential(phi, tilted.tilt, 0.0, guide.radius, kC);
        CHECK(std::abs(from_guide - closed) <= 0.02 * amplitude);
    }
}

TEST_SUITE_END();
