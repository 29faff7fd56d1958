#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "ringlens/config.hpp"
#include "ringlens/driver.hpp"
#include "ringlens/sequence.hpp"

namespace ringlens::analysis {

/// Parameters of the expansion model
///   size(t) = R sqrt(dphi0^2 + dphi_rate^2 (t - t0)^2)
/// fitted by damped Gauss-Newton (Levenberg-Marquardt) least squares.
struct ExpansionFit {
    double dphi0 = 0.0;      // rad
    double dphi_rate = 0.0;  // rad/s
    double t0 = 0.0;         // s, bounded to the sampled window
    double residual = 0.0;   // m, rms
    std::array<std::array<double, 3>, 3> covariance{};
    bool dynamic_range_ok = true;  // size change >= 20% over the window
    int outliers = 0;              // samples beyond 5x residual
};

/// Fits the expansion model. Requires >= 5 finite samples; throws FitError
/// otherwise or when the iteration fails to converge.
ExpansionFit fit_expansion(std::span<const double> t, std::span<const double> size,
                           double ring_radius);

struct EnergyReport {
    double e_kin = 0.0;            // J per atom
    double t_rms = 0.0;            // K
    MatterKind kind = MatterKind::thermal;
    double cooling_factor = 1.0;   // reference E / this E, when a reference is set
};

/// Azimuthal kinetic energy from a fitted expansion rate:
///   thermal  E = 1/2 m (R dphi_rate)^2,  T_rms = m (R dphi_rate)^2 / kB
///   bec      E = 1/7 m (R dphi_rate)^2,  T_rms = E / kB
/// R is the ring radius; dphi_rate comes from the respective size trace.
EnergyReport kinetic_energy(const ExpansionFit& fit, double ring_radius, MatterKind kind,
                            const PhysicalConstants& constants);

EnergyReport with_cooling(EnergyReport report, const EnergyReport& reference);

struct ScanPoint {
    double delta = 0.0;  // rad
    double e_kin = 0.0;  // J per atom (post-lens fit)
    bool fit_ok = false;
};

struct ScanResult {
    std::vector<ScanPoint> points;
    double best_delta = 0.0;
    double best_energy = 0.0;
    bool has_best = false;
};

/// Runs the configured sequence once per tilt value, fitting the post-lens
/// expansion. The pre-lens stages are shared by every point (they do not
/// depend on the lens), so they are integrated once and the state reused.
/// Per-point failures are recorded; successful points form the curve.
ScanResult scan_lens(const RunConfig& config, const driver::Prepared& prep,
                     std::span<const double> deltas, int n_threads = 1);

struct OptimizeResult {
    double delta_star = 0.0;
    double energy = 0.0;  // J per atom at the optimum
    int evaluations = 0;
};

/// Coarse pre-scan (unimodality check) followed by golden-section search.
/// Throws NonUnimodalError when the pre-scan is not U-shaped.
OptimizeResult optimize_delta(const RunConfig& config, const driver::Prepared& prep, double lo,
                              double hi, double tolerance);

/// The post-lens energy objective used by scan_lens / optimize_delta,
/// exposed for tests and drivers: E(delta) with everything else fixed.
class LensObjective {
  public:
    LensObjective(const RunConfig& config, const driver::Prepared& prep);
    ~LensObjective();
    LensObjective(LensObjective&&) noexcept;

    /// Post-lens kinetic energy per atom (J); fit_ok reports fit health.
    double evaluate(double delta, bool* fit_ok = nullptr) const;
    MatterKind kind() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ringlens::analysis
