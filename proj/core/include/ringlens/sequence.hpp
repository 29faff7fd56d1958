#pragma once

#include <string>
#include <vector>

#include "ringlens/config.hpp"
#include "ringlens/ensemble.hpp"
#include "ringlens/gpe.hpp"
#include "ringlens/taap.hpp"

namespace ringlens::seq {

/// Two-segment launch profile: the trap well is dragged with constant
/// angular acceleration for a whole number of trap periods (force on),
/// then coasts (force off). In the harmonic-transport approximation the
/// cloud exits at the target velocity with zero residual sloshing.
struct LaunchPlan {
    double delta = 0.0;       // rad, tilt forming the launch well
    double omega_well = 0.0;  // rad/s
    double accel = 0.0;       // rad/s^2, well-center angular acceleration
    double duration = 0.0;    // s, accelerating segment (k full periods)
    int periods = 0;

    bool empty() const { return duration == 0.0; }
};

/// Closed-form switch times for the bang-bang launch. Throws
/// UnachievableLaunchError when the tilt cannot supply the force.
LaunchPlan plan_bang_bang(double v_target, double trap_omega, double delta_max,
                          double ring_radius, const PhysicalConstants& constants);

struct TraceSample {
    double t = 0.0;           // s, absolute run time
    std::string stage;        // e.g. "expand2"
    int stage_index = -1;
    double com = 0.0;         // rad, wrapped
    double com_rate = 0.0;    // rad/s
    double sigma = 0.0;       // m (thermal: arc sigma; bec: rms width)
    double size = 0.0;        // m (thermal: 1/e radius; bec: TF radius)
    bool size_ok = true;      // false once wrapped / fit failed
    bool wrapped = false;
    double energy = 0.0;      // J (bec: GPE total; thermal: unused)
};

/// Carry-over between composed sequence runs: absolute time, the lens
/// anchor (launch angle and angular velocity), and the stage numbering.
struct RunState {
    double t = 0.0;
    double anchor_angle = 0.0;
    double anchor_rate = 0.0;
    bool launched = false;
    int stage_offset = 0;
};

struct TraceSet {
    std::vector<TraceSample> samples;
    RunState final_state;

    /// Samples belonging to stages strictly after global stage index i.
    std::vector<TraceSample> after_stage(int i) const;
};

/// Executes the plan on a thermal ensemble. Stages map onto potentials:
/// Hold and LensPulse are tilt wells co-moving with the launch anchor,
/// Launch drags the well per plan_bang_bang, Expand is the flat guide.
TraceSet run_sequence(ens::ParticleEnsemble& matter, const SequencePlan& plan,
                      const taap::RingGuide1D& guide, const PhysicalConstants& constants,
                      const SolverParams& solver, RunState* state = nullptr);

/// Same protocol for a condensate, evolved by the spectral solver.
TraceSet run_sequence(gpe::WaveFunction& matter, const SequencePlan& plan,
                      const taap::RingGuide1D& guide, const PhysicalConstants& constants,
                      const SolverParams& solver, double g1d, RunState* state = nullptr);

/// Quadrature time-of-flight broadening of an in-guide size.
double emulate_tof(double size_in_guide, double v_rms, double tof);

}  // namespace ringlens::seq
