#include <doctest.h>

#include <cmath>
#include <vector>

#include "ringlens/analysis.hpp"
#include "ringlens/errors.hpp"
#include "ringlens/optimize.hpp"
#include "ringlens/rng.hpp"

using namespace ringlens;

namespace {
const PhysicalConstants kC;
constexpr double kR = 485e-6;
}  // namespace

TEST_SUITE_BEGIN("fast");

TEST_CASE("golden section finds a quadratic minimum") {
    const double x = golden_section_min([](double u) { return 3.0 * (u - 0.07) * (u - 0.07) + 1.0; },
                                        0.0, 0.15, 1e-6);
    CHECK(x == doctest::Approx(0.07).epsilon(1e-4));
}

TEST_CASE("synthetic expansion trace round trip") {
    const double dphi0 = 0.02, rate = 0.5, t0 = 0.01;
    NormalSampler noise(31);
    std::vector<double> ts, sizes;
    for (int i = 0; i < 40; ++i) {
        const double t = 0.0 + 0.005 * i;
        const double tau = t - t0;
        const double clean = kR * std::sqrt(dphi0 * dphi0 + rate * rate * tau * tau);
        ts.push_back(t);
        sizes.push_back(clean * (1.0 + 0.01 * noise()));
    }
    const auto fit = analysis::fit_expansion(ts, sizes, kR);
    CHECK(fit.dphi0 == doctest::Approx(dphi0).epsilon(0.02));
    CHECK(fit.dphi_rate == doctest::Approx(rate).epsilon(0.02));
    CHECK(fit.t0 == doctest::Approx(t0).epsilon(0.5));  // weakly identified; bounded only
    CHECK(fit.dynamic_range_ok);
    CHECK(fit.outliers == 0);
}

TEST_CASE("constant trace flags insufficient dynamic range") {
    std::vector<double> ts, sizes;
    for (int i = 0; i < 12; ++i) {
        ts.push_back(0.001 * i);
        sizes.push_back(50e-6);
    }
    const auto fit = analysis::fit_expansion(ts, sizes, kR);
    CHECK(fit.dphi_rate < 1e-3);
    CHECK(!fit.dynamic_range_ok);
}

TEST_CASE("asymptotically linear trace recovers the slope exactly") {
    const double slope = 2.4e-3;  // m/s
    std::vector<double> ts, sizes;
    for (int i = 0; i < 30; ++i) {
        const double t = 0.05 + 0.01 * i;
        ts.push_back(t);
        sizes.push_back(slope * t);  // dphi0 = 0, t0 = 0
    }
    const auto fit = analysis::fit_expansion(ts, sizes, kR);
    CHECK(kR * fit.dphi_rate == doctest::Approx(slope).epsilon(1e-6));
}

TEST_CASE("fit needs five samples") {
    std::vector<double> ts = {0, 0.01, 0.02};
    std::vector<double> sizes = {1e-5, 2e-5, 3e-5};
    CHECK_THROWS_AS((void)analysis::fit_expansion(ts, sizes, kR), FitError);
}

TEST_CASE("fit is scale equivariant") {
    std::vector<double> ts, sizes;
    NormalSampler noise(7);
    for (int i = 0; i < 25; ++i) {
        const double t = 0.004 * i;
        const double tau = t - 0.02;
        sizes.push_back(kR * std::sqrt(0.03 * 0.03 + 0.4 * 0.4 * tau * tau) *
                        (1.0 + 0.005 * noise()));
        ts.push_back(t);
    }
    const auto base = analysis::fit_expansion(ts, sizes, kR);

    const double c = 3.7;
    auto scaled_sizes = sizes;
    for (auto& s : scaled_sizes) s *= c;
    const auto scaled = analysis::fit_expansion(ts, scaled_sizes, c * kR);

    CHECK(scaled.dphi0 == doctest::Approx(base.dphi0).epsilon(1e-12));
    CHECK(scaled.dphi_rate == doctest::Approx(base.dphi_rate).epsilon(1e-12));
    CHECK(scaled.t0 == doctest::Approx(base.t0).epsilon(1e-9));
}

TEST_CASE("kinetic energy formulas") {
    analysis::ExpansionFit fit;
    fit.dphi_rate = 4.24e-3 / kR;  // R dphi_rate = 4.24 mm/s

    const auto thermal = analysis::kinetic_energy(fit, kR, MatterKind::thermal, kC);
    CHECK(thermal.t_rms == doctest::Approx(188e-9).epsilon(0.005));
    CHECK(thermal.e_kin ==
          doctest::Approx(0.5 * kC.atom_mass * 4.24e-3 * 4.24e-3).epsilon(1e-12));

    const auto bec = analysis::kinetic_energy(fit, kR, MatterKind::bec, kC);
    CHECK(bec.e_kin / thermal.e_kin == doctest::Approx(2.0 / 7.0).epsilon(1e-12));

    analysis::ExpansionFit still;
    still.dphi_rate = 0.0;
    CHECK(analysis::kinetic_energy(still, kR, MatterKind::thermal, kC).e_kin == 0.0);

    // monotone in the rate
    double last = -1.0;
    for (double rate : {0.1, 0.5, 1.0, 3.0}) {
        analysis::ExpansionFit f;
        f.dphi_rate = rate;
        const double e = analysis::kinetic_energy(f, kR, MatterKind::thermal, kC).e_kin;
        CHECK(e > last);
        last = e;
    }
}

TEST_CASE("cooling factor is relative to the reference") {
    analysis::EnergyReport reference;
    reference.e_kin = 10.0;
    analysis::EnergyReport lensed;
    lensed.e_kin = 2.5;
    CHECK(analysis::with_cooling(lensed, reference).cooling_factor == doctest::Approx(4.0));
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("slow");

namespace {

/// Small paper-like scenario for the scan plumbing: modest ensemble,
/// short final expansion, uncalibrated analytic guide.
RunConfig small_scan_config() {
    RunConfig config;
    config.matter.kind = MatterKind::thermal;
    config.matter.temperature = 116e-9;
    config.solver.ensemble_size = 4000;
    config.solver.sample_interval = 4e-3;
    config.sequence.stages = {HoldStage{42.4, 0.002}, LaunchStage{0.031, 0.15},
                              ExpandStage{0.066}, LensStage{0.07, 0.017}, ExpandStage{0.12}};
    config.seed = 2;
    return config;
}

driver::Prepared fake_prepared(const RunConfig& config) {
    driver::Prepared prep;
    prep.guide.radius = kR;
    prep.guide.omega_perp = two_pi * 100.0;
    prep.calibrated_taap = config.taap;
    return prep;
}

}  // namespace

TEST_CASE("scan argmin does not depend on the point order") {
    const auto config = small_scan_config();
    const auto prep = fake_prepared(config);

    const std::vector<double> forward = {0.0, 0.03, 0.05, 0.07, 0.1};
    std::vector<double> backward(forward.rbegin(), forward.rend());

    const auto a = analysis::scan_lens(config, prep, forward);
    const auto b = analysis::scan_lens(config, prep, backward);
    REQUIRE(a.has_best);
    REQUIRE(b.has_best);
    CHECK(a.best_delta == b.best_delta);
    CHECK(a.best_energy == b.best_energy);

    // and the lens never makes things worse than no lens on its own curve
    double e_free = 0.0;
    for (const auto& p : a.points)
        if (p.delta == 0.0) e_free = p.e_kin;
    CHECK(a.best_energy <= e_free);
}

TEST_CASE("optimizer agrees with a dense scan") {
    const auto config = small_scan_config();
    const auto prep = fake_prepared(config);

    const auto result = analysis::optimize_delta(config, prep, 0.005, 0.15, 0.002);

    std::vector<double> deltas;
    for (int i = 0; i <= 29; ++i) deltas.push_back(0.005 + (0.15 - 0.005) * i / 29.0);
    const auto scan = analysis::scan_lens(config, prep, deltas);
    REQUIRE(scan.has_best);
    CHECK(std::abs(result.delta_star - scan.best_delta) < 0.006);
}

TEST_SUITE_END();
