#pragma once

#include "ringlens/config.hpp"
#include "ringlens/ensemble.hpp"
#include "ringlens/gpe.hpp"
#include "ringlens/taap.hpp"

namespace ringlens::driver {

/// Geometry derived from a RunConfig: the calibrated field parameters and
/// the reduced guide. Matter- and sequence-dependent quantities (initial
/// trap, interaction strength) are resolved per config by the helpers
/// below, so one Prepared can serve many run variants on the same ring.
struct Prepared {
    TaapConfig calibrated_taap;
    taap::RingGuide1D guide;
};

/// Calibrates the ring to taap.ring_radius_target when auto_calibrate is
/// set and reduces the guide. Deterministic.
Prepared prepare(const RunConfig& config);

/// Frequency of the well the matter starts in: the first hold stage, else
/// the launch well. Throws ConfigError when the sequence defines neither.
double trap_omega(const RunConfig& config, const Prepared& prep);

/// 1D interaction strength from matter.omega_perp, falling back to the
/// guide's extracted transverse frequency when the override is zero.
double g1d_of(const RunConfig& config, const Prepared& prep);

StagePotential initial_trap(const RunConfig& config, const Prepared& prep);

ens::ParticleEnsemble make_thermal(const RunConfig& config, const Prepared& prep);

gpe::WaveFunction make_bec(const RunConfig& config, const Prepared& prep);

}  // namespace ringlens::driver
