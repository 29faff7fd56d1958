#include "ringlens/sequence.hpp"

#include <cmath>

#include "ringlens/errors.hpp"

namespace ringlens::seq {

LaunchPlan plan_bang_bang(double v_target, double trap_omega, double delta_max,
                          double ring_radius, const PhysicalConstants& c) {
    LaunchPlan plan;
    if (v_target == 0.0) return plan;
    if (!(v_target > 0.0)) throw UnachievableLaunchError("launch velocity must be >= 0");
    if (!(trap_omega > 0.0) || !(delta_max > 0.0))
        throw UnachievableLaunchError("launch requires a confining well (omega, delta_max > 0)");

    const double omega_target = v_target / ring_radius;      // rad/s
    const double period = two_pi / trap_omega;
    const double accel_max = c.gravity * std::sin(delta_max) / ring_radius;  // rad/s^2
    // Dragging the well by one full period per segment cancels sloshing;
    // more periods lower the force and the in-well displacement.
    constexpr double kMaxDisplacement = 0.10;  // rad, harmonic regime of the cosine well
    for (int k = 1; k <= 10000; ++k) {
        const double accel = omega_target / (k * period);
        const double displacement = accel / (trap_omega * trap_omega);
        if (accel <= accel_max && displacement <= kMaxDisplacement) {
            plan.delta = delta_max;
            plan.omega_well = trap_omega;
            plan.accel = accel;
            plan.duration = k * period;
            plan.periods = k;
            return plan;
        }
    }
    throw UnachievableLaunchError("target velocity unreachable at this tilt");
}

double emulate_tof(double size_in_guide, double v_rms, double tof) {
    return std::sqrt(size_in_guide * size_in_guide + v_rms * tof * v_rms * tof);
}

std::vector<TraceSample> TraceSet::after_stage(int i) const {
    std::vector<TraceSample> out;
    for (const auto& s : samples)
        if (s.stage_index > i) out.push_back(s);
    return out;
}

namespace {

double wrap_2pi(double phi) {
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

std::string stage_name(const Stage& stage, int index) {
    const char* base = "stage";
    if (std::holds_alternative<HoldStage>(stage)) base = "hold";
    else if (std::holds_alternative<LaunchStage>(stage)) base = "launch";
    else if (std::holds_alternative<ExpandStage>(stage)) base = "expand";
    else if (std::holds_alternative<LensStage>(stage)) base = "lens";
    else if (std::holds_alternative<ReleaseStage>(stage)) base = "release";
    return base + std::to_string(index);
}

/// Adapter for the thermal ensemble.
struct EnsembleMatter {
    ens::ParticleEnsemble& m;
    const PhysicalConstants& c;
    double dt;

    double ring_radius() const { return m.ring_radius; }

    void advance(const StagePotential& pot, double t0, double duration, double) {
        ens::step(m, pot, t0, duration, dt, c);
    }

    void fill_sample(TraceSample& s, const StagePotential&, double) const {
        const auto cs = ens::cloud_size(m);
        s.com = cs.com;
        s.com_rate = cs.com_rate;
        s.sigma = cs.sigma;
        s.size = cs.r_1e;
        s.wrapped = cs.wrapped;
        s.size_ok = !cs.wrapped;
        s.energy = 0.0;
    }

    double v_rms() const {
        const std::size_t n = m.size();
        double mean = 0.0;
        for (double v : m.angular_velocity) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : m.angular_velocity) var += (v - mean) * (v - mean);
        return m.ring_radius * std::sqrt(var / n);
    }
};

/// Adapter for the condensate.
struct BecMatter {
    gpe::WaveFunction& m;
    const PhysicalConstants& c;
    double dt;
    double g1d;

    double ring_radius() const { return m.ring_radius; }

    void advance(const StagePotential& pot, double t0, double duration, double rate_hint) {
        // Keep the spectral envelope centered on the cloud's velocity; the
        // hint follows the preprogrammed stage profile, not a measurement.
        gpe::rebase(m, gpe::carrier_for_rate(rate_hint, m.ring_radius, c));
        gpe::evolve(m, pot, t0, duration, dt, g1d, c);
    }

    void fill_sample(TraceSample& s, const StagePotential& pot, double t_local) const {
        const auto obs = gpe::observe(m, &pot, t_local, g1d, c);
        s.com = obs.com_angle;
        s.com_rate = obs.com_velocity;
        s.sigma = obs.rms_width;
        s.size = obs.tf_radius;
        s.wrapped = obs.wrapped;
        s.size_ok = obs.tf_fit_ok && !obs.wrapped;
        s.energy = obs.energy_total;
    }

    double v_rms() const {
        const auto obs = gpe::observe(m, nullptr, 0.0, g1d, c);
        const double per_atom = 2.0 * obs.energy_kinetic / (c.atom_mass * m.atom_number);
        const double com = m.ring_radius * obs.com_velocity;
        return std::sqrt(std::max(0.0, per_atom - com * com));
    }
};

template <typename Matter>
TraceSet run_impl(Matter matter, const SequencePlan& plan, const taap::RingGuide1D& guide,
                  const SolverParams& solver, const PhysicalConstants& c, RunState* io_state) {
    (void)guide;  // geometry is baked into the matter; kept for symmetry
    RunState state = io_state ? *io_state : RunState{};
    TraceSet trace;

    auto record = [&](const std::string& label, int index, const StagePotential& pot,
                      double t_local) {
        TraceSample s;
        s.t = state.t;
        s.stage = label;
        s.stage_index = index;
        matter.fill_sample(s, pot, t_local);
        trace.samples.push_back(std::move(s));
    };

    if (trace.samples.empty() && state.stage_offset == 0)
        record("init", -1, StagePotential::free_guide(), 0.0);

    const double R = matter.ring_radius();
    for (std::size_t si = 0; si < plan.stages.size(); ++si) {
        const Stage& stage = plan.stages[si];
        const int index = state.stage_offset + static_cast<int>(si);
        const std::string label = stage_name(stage, index);

        StagePotential pot = StagePotential::free_guide();
        double duration = 0.0;
        double accel = 0.0;

        if (const auto* h = std::get_if<HoldStage>(&stage)) {
            const double delta = taap::delta_for_frequency(h->trap_omega, R, c);
            pot = StagePotential::tilt_lens(delta, state.anchor_angle, state.anchor_rate, 0.0, R,
                                            c);
            duration = h->duration;
        } else if (const auto* l = std::get_if<LaunchStage>(&stage)) {
            const double omega_well = taap::lens_frequency(l->delta_max, R, c);
            const LaunchPlan lp = plan_bang_bang(l->v_target, omega_well, l->delta_max, R, c);
            if (!lp.empty()) {
                pot = StagePotential::tilt_lens(lp.delta, state.anchor_angle, state.anchor_rate,
                                                lp.accel, R, c);
                duration = lp.duration;
                accel = lp.accel;
            }
        } else if (const auto* e = std::get_if<ExpandStage>(&stage)) {
            duration = e->duration;
        } else if (const auto* p = std::get_if<LensStage>(&stage)) {
            pot = StagePotential::tilt_lens(p->delta, state.anchor_angle, state.anchor_rate, 0.0,
                                            R, c);
            duration = p->tau;
        } else if (const auto* r = std::get_if<ReleaseStage>(&stage)) {
            // Imaging emulation: no in-guide dynamics, one broadened sample.
            TraceSample s;
            s.t = state.t + r->tof;
            s.stage = label;
            s.stage_index = index;
            matter.fill_sample(s, pot, 0.0);
            const double spread = matter.v_rms();
            s.size = emulate_tof(s.size, spread, r->tof);
            s.sigma = emulate_tof(s.sigma, spread, r->tof);
            s.com = wrap_2pi(s.com + s.com_rate * r->tof);
            state.t += r->tof;
            trace.samples.push_back(std::move(s));
            continue;
        }

        double done = 0.0;
        while (done < duration - 1e-15) {
            const double chunk = std::min(solver.sample_interval, duration - done);
            const double rate_hint = state.anchor_rate + accel * (done + 0.5 * chunk);
            matter.advance(pot, done, chunk, rate_hint);
            done += chunk;
            state.t += chunk;
            record(label, index, pot, done);
        }

        // Anchor bookkeeping: stages advance the co-moving frame.
        state.anchor_angle += state.anchor_rate * duration + 0.5 * accel * duration * duration;
        state.anchor_rate += accel * duration;
        if (std::holds_alternative<LaunchStage>(stage)) state.launched = true;
    }

    state.stage_offset += static_cast<int>(plan.stages.size());
    trace.final_state = state;
    if (io_state) *io_state = state;
    return trace;
}

}  // namespace

TraceSet run_sequence(ens::ParticleEnsemble& matter, const SequencePlan& plan,
                      const taap::RingGuide1D& guide, const PhysicalConstants& c,
                      const SolverParams& solver, RunState* state) {
    return run_impl(EnsembleMatter{matter, c, solver.time_step}, plan, guide, solver, c, state);
}

TraceSet run_sequence(gpe::WaveFunction& matter, const SequencePlan& plan,
                      const taap::RingGuide1D& guide, const PhysicalConstants& c,
                      const SolverParams& solver, double g1d, RunState* state) {
    return run_impl(BecMatter{matter, c, solver.time_step, g1d}, plan, guide, solver, c, state);
}

}  // namespace ringlens::seq
