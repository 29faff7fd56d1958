#include "ringlens/driver.hpp"

#include "ringlens/errors.hpp"

namespace ringlens::driver {

Prepared prepare(const RunConfig& config) {
    Prepared prep;
    prep.calibrated_taap =
        config.taap.auto_calibrate
            ? taap::calibrate_ring(config.taap.ring_radius_target, config.taap, config.constants)
            : config.taap;
    prep.guide = taap::reduce_to_guide(prep.calibrated_taap, config.constants, 0);
    return prep;
}

double trap_omega(const RunConfig& config, const Prepared& prep) {
    for (const auto& stage : config.sequence.stages) {
        if (const auto* h = std::get_if<HoldStage>(&stage)) return h->trap_omega;
        if (const auto* l = std::get_if<LaunchStage>(&stage))
            return taap::lens_frequency(l->delta_max, prep.guide.radius, config.constants);
    }
    throw ConfigError("sequence needs a hold or launch stage to define the initial trap");
}

double g1d_of(const RunConfig& config, const Prepared& prep) {
    const double omega_perp =
        config.matter.omega_perp > 0.0 ? config.matter.omega_perp : prep.guide.omega_perp;
    return gpe::effective_g1d(omega_perp, config.constants);
}

StagePotential initial_trap(const RunConfig& config, const Prepared& prep) {
    const double omega = trap_omega(config, prep);
    const double delta =
        taap::delta_for_frequency(omega, prep.guide.radius, config.constants);
    return StagePotential::tilt_lens(delta, 0.0, 0.0, 0.0, prep.guide.radius, config.constants);
}

ens::ParticleEnsemble make_thermal(const RunConfig& config, const Prepared& prep) {
    return ens::sample_thermal(config.matter.temperature, trap_omega(config, prep), 0.0,
                               static_cast<std::size_t>(config.solver.ensemble_size),
                               prep.guide.radius, config.constants, config.seed);
}

gpe::WaveFunction make_bec(const RunConfig& config, const Prepared& prep) {
    return gpe::ground_state(initial_trap(config, prep), config.matter.atom_number,
                             prep.guide.radius, g1d_of(config, prep), config.constants,
                             config.solver);
}

}  // namespace ringlens::driver
