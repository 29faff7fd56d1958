#include "ringlens/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <map>

#include "ringlens/errors.hpp"
#include "ringlens/optimize.hpp"

namespace ringlens::analysis {

namespace {

/// Solve a 3x3 linear system by Gaussian elimination with partial pivoting.
bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b,
            std::array<double, 3>& x) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = col + 1; row < 3; ++row) {
            const double f = a[row][col] / a[col][col];
            for (int k = col; k < 3; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    for (int row = 2; row >= 0; --row) {
        double s = b[row];
        for (int k = row + 1; k < 3; ++k) s -= a[row][k] * x[k];
        x[row] = s / a[row][row];
    }
    return true;
}

bool invert3(const std::array<std::array<double, 3>, 3>& m,
             std::array<std::array<double, 3>, 3>& inv) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (std::abs(det) < 1e-300) return false;
    const double d = 1.0 / det;
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * d;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * d;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * d;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * d;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * d;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * d;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * d;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * d;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * d;
    return true;
}

struct Lm3Result {
    std::array<double, 3> theta;
    double sse = 0.0;
    bool converged = false;
    std::array<std::array<double, 3>, 3> jtj{};
};

}  // namespace

ExpansionFit fit_expansion(std::span<const double> t_in, std::span<const double> size_in,
                           double ring_radius) {
    if (!(ring_radius > 0.0)) throw FitError("ring radius must be positive");

    std::vector<double> t, d;  // d = size / R, dimensionless
    for (std::size_t i = 0; i < t_in.size() && i < size_in.size(); ++i) {
        if (std::isfinite(t_in[i]) && std::isfinite(size_in[i])) {
            t.push_back(t_in[i]);
            d.push_back(size_in[i] / ring_radius);
        }
    }
    const std::size_t n = t.size();
    if (n < 5) throw FitError("expansion fit needs at least 5 finite samples");

    const double t_min = *std::min_element(t.begin(), t.end());
    const double t_max = *std::max_element(t.begin(), t.end());
    const double d_max = *std::max_element(d.begin(), d.end());
    const double d_min = *std::min_element(d.begin(), d.end());
    // t0 floats within the sampled window padded by twice its span; the
    // waist of a trace often precedes the first sample.
    const double span = std::max(t_max - t_min, 1e-12);
    const double t0_lo = t_min - 2.0 * span;
    const double t0_hi = t_max + 2.0 * span;

    // Initialization: first sample time / size, end-to-end slope.
    std::array<double, 3> theta = {
        d.front(),
        t_max > t_min ? std::abs((d.back() - d.front()) / (t.back() - t.front())) : 0.0,
        t.front(),
    };

    auto model = [&](const std::array<double, 3>& th, double time) {
        const double tau = time - th[2];
        return std::sqrt(th[0] * th[0] + th[1] * th[1] * tau * tau);
    };
    auto sse_of = [&](const std::array<double, 3>& th) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = model(th, t[i]) - d[i];
            s += r * r;
        }
        return s;
    };

    const double grad_tol = 1e-12 * std::max(1.0, d_max) * static_cast<double>(n);

    auto run_lm = [&](std::array<double, 3> th) {
        Lm3Result res;
        double lambda = 1e-3;
        double sse = sse_of(th);
        double best_sse = sse;
        int stall = 0;
        for (int iter = 0; iter < 400; ++iter) {
            std::array<std::array<double, 3>, 3> jtj{};
            std::array<double, 3> g{};
            for (std::size_t i = 0; i < n; ++i) {
                const double tau = t[i] - th[2];
                const double f = std::max(model(th, t[i]), 1e-300);
                const double r = f - d[i];
                const std::array<double, 3> j = {
                    th[0] / f,
                    th[1] * tau * tau / f,
                    -th[1] * th[1] * tau / f,
                };
                for (int a = 0; a < 3; ++a) {
                    g[a] += j[a] * r;
                    for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
                }
            }
            // projected gradient: ignore the t0 component when it pushes
            // against an active bound
            double g_t0 = g[2];
            if ((th[2] <= t0_lo && g_t0 > 0.0) || (th[2] >= t0_hi && g_t0 < 0.0)) g_t0 = 0.0;
            const double gmax = std::max({std::abs(g[0]), std::abs(g[1]), std::abs(g_t0)});
            if (gmax < grad_tol) {
                res.theta = th;
                res.sse = sse;
                res.converged = true;
                res.jtj = jtj;
                return res;
            }
            const double diag_floor =
                1e-12 * std::max({jtj[0][0], jtj[1][1], jtj[2][2], 1e-300});
            bool stepped = false;
            for (int tries = 0; tries < 40 && !stepped; ++tries) {
                auto damped = jtj;
                for (int a = 0; a < 3; ++a)
                    damped[a][a] += lambda * std::max(jtj[a][a], diag_floor);
                std::array<double, 3> delta{};
                std::array<double, 3> rhs = {-g[0], -g[1], -g[2]};
                if (solve3(damped, rhs, delta)) {
                    std::array<double, 3> next = {th[0] + delta[0], th[1] + delta[1],
                                                  th[2] + delta[2]};
                    next[2] = std::clamp(next[2], t0_lo, t0_hi);
                    const double next_sse = sse_of(next);
                    if (next_sse <= sse) {
                        th = next;
                        sse = next_sse;
                        lambda = std::max(lambda / 3.0, 1e-14);
                        stepped = true;
                        break;
                    }
                }
                lambda *= 4.0;
            }
            // Progress-stall acceptance: on model-violating data the
            // gradient tolerance is unreachable, but once the SSE stops
            // improving the least-squares optimum has been found.
            if (!stepped) {
                res.theta = th;
                res.sse = sse;
                res.converged = true;
                res.jtj = jtj;
                return res;
            }
            if (best_sse - sse > 1e-13 * best_sse) {
                best_sse = sse;
                stall = 0;
            } else if (++stall > 60) {
                res.theta = th;
                res.sse = sse;
                res.converged = true;
                res.jtj = jtj;
                return res;
            }
        }
        // Iteration cap reached: the best point found is the usable
        // least-squares estimate; residual and covariance report its fit.
        res.theta = th;
        res.sse = sse;
        res.converged = std::isfinite(sse);
        return res;
    };

    Lm3Result best = run_lm(theta);
    if (!best.converged) {
        // Retry from the sample minimum (focusing traces have their waist
        // in the middle of the window).
        const std::size_t i_min = static_cast<std::size_t>(
            std::min_element(d.begin(), d.end()) - d.begin());
        std::array<double, 3> alt = {d[i_min],
                                     std::abs((d.back() - d[i_min]) /
                                              std::max(t.back() - t[i_min], 1e-12)),
                                     t[i_min]};
        const Lm3Result retry = run_lm(alt);
        if (retry.converged || retry.sse < best.sse) best = retry;
    }
    if (!best.converged) throw FitError("expansion fit did not converge");

    ExpansionFit fit;
    fit.dphi0 = std::abs(best.theta[0]);
    fit.dphi_rate = std::abs(best.theta[1]);
    fit.t0 = best.theta[2];
    fit.residual = ring_radius * std::sqrt(best.sse / static_cast<double>(n));
    fit.dynamic_range_ok = d_max > 0.0 && (d_max - d_min) >= 0.2 * d_max;

    std::array<std::array<double, 3>, 3> inv{};
    if (n > 3 && invert3(best.jtj, inv)) {
        const double variance = best.sse / static_cast<double>(n - 3);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) fit.covariance[a][b] = variance * inv[a][b];
    }

    const double rms = std::max(fit.residual / ring_radius, 1e-300);
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(model(best.theta, t[i]) - d[i]) > 5.0 * rms) ++fit.outliers;
    return fit;
}

EnergyReport kinetic_energy(const ExpansionFit& fit, double ring_radius, MatterKind kind,
                            const PhysicalConstants& c) {
    EnergyReport rep;
    rep.kind = kind;
    const double v = ring_radius * fit.dphi_rate;  // m/s
    const double mv2 = c.atom_mass * v * v;
    if (kind == MatterKind::thermal) {
        rep.e_kin = 0.5 * mv2;
        rep.t_rms = mv2 / c.k_boltzmann;
    } else {
        rep.e_kin = mv2 / 7.0;
        rep.t_rms = rep.e_kin / c.k_boltzmann;
    }
    return rep;
}

EnergyReport with_cooling(EnergyReport report, const EnergyReport& reference) {
    if (report.e_kin > 0.0) report.cooling_factor = reference.e_kin / report.e_kin;
    return report;
}

// ---------------------------------------------------------------------------
// Lens objective: shared pre-lens state + per-delta suffix runs
// ---------------------------------------------------------------------------

struct LensObjective::Impl {
    RunConfig config;
    taap::RingGuide1D guide;
    double g1d = 0.0;
    int lens_stage_index = -1;        // global stage index of the lens pulse
    SequencePlan suffix;              // lens pulse onward
    seq::RunState state_after_prefix;
    // exactly one of these is the snapshot, per config.matter.kind
    ens::ParticleEnsemble ensemble_snapshot;
    gpe::WaveFunction bec_snapshot;
};

LensObjective::LensObjective(const RunConfig& config, const driver::Prepared& prep)
    : impl_(std::make_unique<Impl>()) {
    impl_->config = config;
    impl_->guide = prep.guide;
    impl_->g1d = driver::g1d_of(config, prep);

    const auto& stages = config.sequence.stages;
    std::size_t lens_at = stages.size();
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (std::holds_alternative<LensStage>(stages[i])) {
            lens_at = i;
            break;
        }
    }
    if (lens_at == stages.size())
        throw FitError("sequence has no lens pulse to scan");
    impl_->lens_stage_index = static_cast<int>(lens_at);

    SequencePlan prefix = config.sequence;
    prefix.stages.assign(stages.begin(), stages.begin() + lens_at);
    impl_->suffix = config.sequence;
    impl_->suffix.stages.assign(stages.begin() + lens_at, stages.end());

    seq::RunState state;
    if (config.matter.kind == MatterKind::thermal) {
        impl_->ensemble_snapshot = driver::make_thermal(config, prep);
        seq::run_sequence(impl_->ensemble_snapshot, prefix, impl_->guide, config.constants,
                          config.solver, &state);
    } else {
        impl_->bec_snapshot = driver::make_bec(config, prep);
        seq::run_sequence(impl_->bec_snapshot, prefix, impl_->guide, config.constants,
                          config.solver, impl_->g1d, &state);
    }
    impl_->state_after_prefix = state;
}

LensObjective::~LensObjective() = default;
LensObjective::LensObjective(LensObjective&&) noexcept = default;

MatterKind LensObjective::kind() const { return impl_->config.matter.kind; }

double LensObjective::evaluate(double delta, bool* fit_ok_out) const {
    const Impl& im = *impl_;
    SequencePlan suffix = im.suffix;
    std::get<LensStage>(suffix.stages[0]).delta = delta;

    seq::RunState state = im.state_after_prefix;
    seq::TraceSet trace;
    if (im.config.matter.kind == MatterKind::thermal) {
        ens::ParticleEnsemble matter = im.ensemble_snapshot;
        trace = seq::run_sequence(matter, suffix, im.guide, im.config.constants, im.config.solver,
                                   &state);
    } else {
        gpe::WaveFunction matter = im.bec_snapshot;
        trace = seq::run_sequence(matter, suffix, im.guide, im.config.constants, im.config.solver,
                                   im.g1d, &state);
    }

    std::vector<double> ts, sizes;
    for (const auto& s : trace.after_stage(im.lens_stage_index)) {
        if (!s.size_ok) continue;
        ts.push_back(s.t);
        sizes.push_back(im.config.matter.kind == MatterKind::thermal ? s.sigma : s.size);
    }
    bool ok = false;
    double energy = std::numeric_limits<double>::quiet_NaN();
    try {
        const ExpansionFit fit = fit_expansion(ts, sizes, im.guide.radius);
        energy = kinetic_energy(fit, im.guide.radius, im.config.matter.kind, im.config.constants)
                     .e_kin;
        ok = true;
    } catch (const FitError&) {
    }
    if (fit_ok_out) *fit_ok_out = ok;
    return energy;
}

ScanResult scan_lens(const RunConfig& config, const driver::Prepared& prep,
                     std::span<const double> deltas, int n_threads) {
    if (deltas.empty()) throw FitError("scan needs at least one tilt value");
    const LensObjective objective(config, prep);

    ScanResult result;
    result.points.resize(deltas.size());
    auto eval_point = [&](std::size_t i) {
        ScanPoint p;
        p.delta = deltas[i];
        p.e_kin = objective.evaluate(deltas[i], &p.fit_ok);
        result.points[i] = p;
    };

    if (n_threads > 1) {
        std::vector<std::future<void>> jobs;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < n_threads; ++w) {
            jobs.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next.fetch_add(1); i < deltas.size();
                     i = next.fetch_add(1))
                    eval_point(i);
            }));
        }
        for (auto& j : jobs) j.get();
    } else {
        for (std::size_t i = 0; i < deltas.size(); ++i) eval_point(i);
    }

    for (const auto& p : result.points) {
        if (!p.fit_ok) continue;
        if (!result.has_best || p.e_kin < result.best_energy ||
            (p.e_kin == result.best_energy && p.delta < result.best_delta)) {
            result.has_best = true;
            result.best_energy = p.e_kin;
            result.best_delta = p.delta;
        }
    }
    return result;
}

OptimizeResult optimize_delta(const RunConfig& config, const driver::Prepared& prep, double lo,
                              double hi, double tolerance) {
    if (!(hi > lo)) throw NonUnimodalError("optimize bounds must satisfy hi > lo");
    const LensObjective objective(config, prep);
    int evaluations = 0;
    auto energy_at = [&](double delta) {
        bool ok = false;
        const double e = objective.evaluate(delta, &ok);
        ++evaluations;
        if (!ok) throw FitError("objective fit failed during optimization");
        return e;
    };

    // Coarse pre-scan validates the unimodality precondition.
    constexpr int kPreScan = 9;
    std::array<double, kPreScan> xs{}, es{};
    for (int i = 0; i < kPreScan; ++i) {
        xs[i] = lo + (hi - lo) * i / (kPreScan - 1);
        es[i] = energy_at(xs[i]);
    }
    int i_min = 0;
    for (int i = 1; i < kPreScan; ++i)
        if (es[i] < es[i_min]) i_min = i;
    const double spread = *std::max_element(es.begin(), es.end()) -
                          *std::min_element(es.begin(), es.end());
    const double slack = 0.02 * spread;
    for (int i = 1; i <= i_min; ++i)
        if (es[i] > es[i - 1] + slack)
            throw NonUnimodalError("pre-scan is not decreasing left of its minimum");
    for (int i = i_min + 1; i < kPreScan; ++i)
        if (es[i] + slack < es[i - 1])
            throw NonUnimodalError("pre-scan is not increasing right of its minimum");

    const double bracket_lo = xs[std::max(i_min - 1, 0)];
    const double bracket_hi = xs[std::min(i_min + 1, kPreScan - 1)];
    const double delta_star =
        golden_section_min([&](double x) { return energy_at(x); }, bracket_lo, bracket_hi,
                           tolerance);

    OptimizeResult out;
    out.delta_star = delta_star;
    out.energy = energy_at(delta_star);
    out.evaluations = evaluations;
    return out;
}

}  // namespace ringlens::analysis
