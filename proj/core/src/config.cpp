#include "ringlens/config.hpp"

#include <cmath>
#include <sstream>

namespace ringlens {

SequencePlan default_sequence() {
    SequencePlan plan;
    plan.stages = {
        HoldStage{42.4, 0.01},
        LaunchStage{0.031, 0.150},
        ExpandStage{0.066},
        LensStage{0.070, 0.017},
        ExpandStage{0.200},
    };
    return plan;
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require(std::vector<std::string>& out, bool ok, const std::string& message) {
    if (!ok) out.push_back(message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::vector<std::string> validate(const RunConfig& c) {
    std::vector<std::string> v;

    require(v, finite_positive(c.constants.atom_mass), "constants.atom_mass_kg must be > 0");
    require(v, finite_positive(c.constants.gravity), "constants.gravity_m_per_s2 must be > 0");
    require(v, finite_positive(c.constants.hbar), "constants.hbar_J_s must be > 0");
    require(v, finite_positive(c.constants.k_boltzmann), "constants.boltzmann_J_per_K must be > 0");
    require(v, finite_positive(c.constants.scattering_length),
            "constants.scattering_length_m must be > 0");

    require(v, finite_positive(c.taap.quadrupole_gradient),
            "taap.quadrupole_gradient_T_per_m must be > 0");
    require(v, finite_positive(c.taap.rf_frequency), "taap.rf_frequency_rad_per_s must be > 0");
    require(v, finite_positive(c.taap.rabi_frequency), "taap.rabi_frequency_rad_per_s must be > 0");
    require(v, finite_positive(c.taap.audio_frequency),
            "taap.audio_frequency_rad_per_s must be > 0");
    require(v, finite_positive(c.taap.dressed_moment), "taap.dressed_moment_J_per_T must be > 0");
    require(v, std::isfinite(c.taap.audio_amplitude) && c.taap.audio_amplitude >= 0.0,
            "taap.audio_amplitude_T must be >= 0");
    require(v, std::isfinite(c.taap.tilt) && std::abs(c.taap.tilt) < pi / 4.0,
            "taap.tilt_rad must satisfy |tilt| < pi/4");
    require(v, finite_positive(c.taap.ring_radius_target),
            "taap.ring_radius_target_m must be > 0");

    require(v, is_power_of_two(c.solver.grid_points) && c.solver.grid_points >= 256,
            "solver.grid_points must be a power of two >= 256");
    require(v, finite_positive(c.solver.time_step), "solver.time_step_s must be > 0");
    require(v, finite_positive(c.solver.imaginary_time_tolerance),
            "solver.imaginary_time_tolerance must be > 0");
    require(v, c.solver.ensemble_size >= 1000, "solver.ensemble_size must be >= 1000");
    require(v, finite_positive(c.solver.sample_interval), "solver.sample_interval_s must be > 0");
    require(v, finite_positive(c.solver.imag_time_step), "solver.imag_time_step_s must be > 0");

    require(v, finite_positive(c.matter.atom_number), "matter.atom_number must be > 0");
    require(v, std::isfinite(c.matter.temperature) && c.matter.temperature >= 0.0,
            "matter.temperature_K must be >= 0");
    require(v, std::isfinite(c.matter.omega_perp) && c.matter.omega_perp >= 0.0,
            "matter.omega_perp_rad_per_s must be >= 0");

    int n_launch = 0;
    bool seen_expand = false;
    for (std::size_t i = 0; i < c.sequence.stages.size(); ++i) {
        const auto& stage = c.sequence.stages[i];
        std::ostringstream where;
        where << "sequence.stage" << i;
        if (const auto* h = std::get_if<HoldStage>(&stage)) {
            require(v, finite_positive(h->trap_omega), where.str() + ".omega must be > 0");
            require(v, h->duration >= 0.0, where.str() + ".duration must be >= 0");
        } else if (const auto* l = std::get_if<LaunchStage>(&stage)) {
            ++n_launch;
            require(v, l->v_target >= 0.0, where.str() + ".v must be >= 0");
            require(v, finite_positive(l->delta_max) && l->delta_max < pi / 4.0,
                    where.str() + ".delta_max must be in (0, pi/4)");
        } else if (const auto* e = std::get_if<ExpandStage>(&stage)) {
            require(v, e->duration >= 0.0, where.str() + ".duration must be >= 0");
        } else if (const auto* p = std::get_if<LensStage>(&stage)) {
            require(v, p->tau >= 0.0, where.str() + ".tau must be >= 0");
            require(v, p->delta >= 0.0 && p->delta <= c.sequence.max_tilt,
                    where.str() + ".delta must be in [0, sequence.max_tilt_rad]");
            require(v, seen_expand, where.str() + ": lens pulse must follow an expand stage");
        } else if (const auto* r = std::get_if<ReleaseStage>(&stage)) {
            require(v, r->tof >= 0.0, where.str() + ".tof must be >= 0");
        }
        if (std::holds_alternative<ExpandStage>(stage)) seen_expand = true;
    }
    require(v, n_launch == 1, "sequence must contain exactly one launch stage");
    require(v, finite_positive(c.sequence.max_tilt) && c.sequence.max_tilt < pi / 4.0,
            "sequence.max_tilt_rad must be in (0, pi/4)");

    return v;
}

}  // namespace ringlens
