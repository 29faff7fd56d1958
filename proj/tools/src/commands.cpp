#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "ringlens/analysis.hpp"
#include "ringlens/config_io.hpp"
#include "ringlens/csv.hpp"
#include "ringlens/driver.hpp"
#include "ringlens/errors.hpp"
#include "manifest.hpp"

namespace ringlens::tools {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

RunConfig load_and_finalize(const CommonOptions& opts) {
    RunConfig config = load_config(opts.config_path);
    for (const auto& o : opts.overrides) apply_override(config, o);
    if (opts.seed >= 0) config.seed = static_cast<std::uint64_t>(opts.seed);
    return config;
}

void ensure_valid(const RunConfig& config) {
    const auto violations = validate(config);
    if (violations.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw ConfigError(msg);
}

fs::path ensure_out_dir(const CommonOptions& opts) {
    fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_json(const fs::path& path, const ordered_json& j) {
    csv::write_text_atomic(path, j.dump(2) + "\n");
}

int lens_stage_index(const SequencePlan& plan) {
    for (std::size_t i = 0; i < plan.stages.size(); ++i)
        if (std::holds_alternative<LensStage>(plan.stages[i])) return static_cast<int>(i);
    return -1;
}

int launch_stage_index(const SequencePlan& plan) {
    for (std::size_t i = 0; i < plan.stages.size(); ++i)
        if (std::holds_alternative<LaunchStage>(plan.stages[i])) return static_cast<int>(i);
    return -1;
}

/// Expand-stage samples inside the half-open stage window (from, to);
/// to < 0 means "until the end".
void collect_window(const seq::TraceSet& trace, int from_exclusive, int to_exclusive,
                    bool use_sigma, std::vector<double>& ts, std::vector<double>& sizes) {
    ts.clear();
    sizes.clear();
    for (const auto& s : trace.samples) {
        if (s.stage_index <= from_exclusive) continue;
        if (to_exclusive >= 0 && s.stage_index >= to_exclusive) continue;
        if (s.stage.rfind("expand", 0) != 0) continue;
        if (!s.size_ok) continue;
        ts.push_back(s.t);
        sizes.push_back(use_sigma ? s.sigma : s.size);
    }
}

ordered_json fit_to_json(const analysis::ExpansionFit& fit, const analysis::EnergyReport& energy,
                         const PhysicalConstants& c) {
    ordered_json j;
    j["dphi0_rad"] = fit.dphi0;
    j["dphi_rate_rad_per_s"] = fit.dphi_rate;
    j["t0_s"] = fit.t0;
    j["residual_m"] = fit.residual;
    j["dynamic_range_ok"] = fit.dynamic_range_ok;
    j["outliers"] = fit.outliers;
    j["E_J"] = energy.e_kin;
    j["E_nK"] = to_kelvin(energy.e_kin, c) * 1e9;
    j["T_rms_K"] = energy.t_rms;
    return j;
}

seq::TraceSet run_any(const RunConfig& config, const driver::Prepared& prep) {
    if (config.matter.kind == MatterKind::thermal) {
        auto matter = driver::make_thermal(config, prep);
        return seq::run_sequence(matter, config.sequence, prep.guide, config.constants,
                                 config.solver);
    }
    auto matter = driver::make_bec(config, prep);
    return seq::run_sequence(matter, config.sequence, prep.guide, config.constants, config.solver,
                             driver::g1d_of(config, prep));
}

void log_stages(const seq::TraceSet& trace) {
    std::string last;
    for (const auto& s : trace.samples) {
        if (s.stage != last) {
            std::cerr << "stage " << s.stage << " from t=" << s.t << " s\n";
            last = s.stage;
        }
    }
}

}  // namespace

int cmd_validate(const CommonOptions& opts) {
    RunConfig config = load_and_finalize(opts);
    const auto violations = validate(config);
    for (const auto& v : violations) std::cout << v << "\n";
    return violations.empty() ? 0 : 1;
}

int cmd_potential_map(const CommonOptions& opts, const std::string& kind, int samples) {
    Stopwatch watch;
    RunConfig config = load_and_finalize(opts);
    ensure_valid(config);
    const auto dir = ensure_out_dir(opts);
    const auto prep = driver::prepare(config);

    std::vector<std::string> outputs;
    if (kind == "guide") {
        const auto guide =
            taap::reduce_to_guide(prep.calibrated_taap, config.constants, samples);
        csv::Table table({"phi_rad", "V_J"});
        for (int j = 0; j < samples; ++j) {
            table.add(two_pi * j / samples);
            table.add(guide.azimuthal_potential[j]);
        }
        table.write(dir / "potential_guide.csv");
        outputs.push_back("potential_guide.csv");
    } else if (kind == "plane") {
        const double R = prep.guide.radius;
        csv::Table table({"x_m", "y_m", "z_m", "V_J"});
        for (int i = 0; i < samples; ++i) {
            const double x = -1.5 * R + 3.0 * R * i / (samples - 1);
            for (int j = 0; j < samples; ++j) {
                const double y = -1.5 * R + 3.0 * R * j / (samples - 1);
                table.add(x);
                table.add(y);
                table.add(prep.guide.z0);
                table.add(taap::taap_potential({x, y, prep.guide.z0}, prep.calibrated_taap,
                                               config.constants));
            }
        }
        table.write(dir / "potential_plane.csv");
        outputs.push_back("potential_plane.csv");
    } else {
        throw ConfigError("potential-map kind must be 'guide' or 'plane'");
    }
    write_manifest(dir, config, outputs, watch.seconds());
    return 0;
}

int cmd_groundstate(const CommonOptions& opts) {
    Stopwatch watch;
    RunConfig config = load_and_finalize(opts);
    ensure_valid(config);
    const auto dir = ensure_out_dir(opts);
    const auto prep = driver::prepare(config);

    const auto psi = driver::make_bec(config, prep);
    const auto trap = driver::initial_trap(config, prep);
    const auto obs = gpe::observe(psi, &trap, 0.0, driver::g1d_of(config, prep), config.constants);

    csv::Table table({"phi_rad", "density_per_m"});
    for (int j = 0; j < psi.n(); ++j) {
        table.add(two_pi * j / psi.n());
        table.add(std::norm(psi.amplitude[j]));
    }
    table.write(dir / "groundstate.csv");

    ordered_json j;
    j["atom_number"] = psi.atom_number;
    j["ring_radius_m"] = psi.ring_radius;
    j["g1d_J_m"] = driver::g1d_of(config, prep);
    j["trap_omega_rad_per_s"] = driver::trap_omega(config, prep);
    j["energy_total_J"] = obs.energy_total;
    j["energy_kinetic_J"] = obs.energy_kinetic;
    j["energy_potential_J"] = obs.energy_potential;
    j["energy_interaction_J"] = obs.energy_interaction;
    j["rms_width_m"] = obs.rms_width;
    j["tf_radius_m"] = obs.tf_radius;
    write_json(dir / "groundstate.json", j);

    write_manifest(dir, config, {"groundstate.csv", "groundstate.json"}, watch.seconds());
    return 0;
}

int cmd_simulate(const CommonOptions& opts) {
    Stopwatch watch;
    RunConfig config = load_and_finalize(opts);
    ensure_valid(config);
    const auto dir = ensure_out_dir(opts);
    const auto prep = driver::prepare(config);

    const auto trace = run_any(config, prep);
    log_stages(trace);

    csv::Table table({"t_s", "size_m", "com_rad", "com_rad_per_s", "stage_label"});
    for (const auto& s : trace.samples) {
        table.add(s.t);
        table.add(s.size_ok ? csv::format_double(s.size) : std::string("nan"));
        table.add(s.com);
        table.add(s.com_rate);
        table.add(s.stage);
    }
    table.write(dir / "trace.csv");

    const bool thermal = config.matter.kind == MatterKind::thermal;
    const int launch_at = launch_stage_index(config.sequence);
    const int lens_at = lens_stage_index(config.sequence);

    ordered_json j;
    j["kind"] = thermal ? "thermal" : "bec";
    j["seed"] = config.seed;
    j["ring_radius_m"] = prep.guide.radius;
    j["omega_perp_rad_per_s"] =
        config.matter.omega_perp > 0.0 ? config.matter.omega_perp : prep.guide.omega_perp;
    j["fit_source"] = thermal ? "sigma" : "tf_radius";
    if (!thermal) j["g1d_J_m"] = driver::g1d_of(config, prep);

    std::vector<double> ts, sizes;
    collect_window(trace, launch_at, lens_at, thermal, ts, sizes);
    if (ts.size() >= 5) {
        try {
            const auto fit = analysis::fit_expansion(ts, sizes, prep.guide.radius);
            const auto energy = analysis::kinetic_energy(fit, prep.guide.radius,
                                                         config.matter.kind, config.constants);
            j["pre_lens_fit"] = fit_to_json(fit, energy, config.constants);
        } catch (const FitError& e) {
            j["pre_lens_fit"] = {{"error", e.what()}};
        }
    }
    if (lens_at >= 0) {
        collect_window(trace, lens_at, -1, thermal, ts, sizes);
        if (ts.size() >= 5) {
            try {
                const auto fit = analysis::fit_expansion(ts, sizes, prep.guide.radius);
                const auto energy = analysis::kinetic_energy(fit, prep.guide.radius,
                                                             config.matter.kind, config.constants);
                j["post_lens_fit"] = fit_to_json(fit, energy, config.constants);
            } catch (const FitError& e) {
                j["post_lens_fit"] = {{"error", e.what()}};
            }
        }
    }
    write_json(dir / "summary.json", j);

    write_manifest(dir, config, {"trace.csv", "summary.json"}, watch.seconds());
    return 0;
}

int cmd_ensemble(const CommonOptions& opts) {
    Stopwatch watch;
    RunConfig config = load_and_finalize(opts);
    config.matter.kind = MatterKind::thermal;
    ensure_valid(config);
    const auto dir = ensure_out_dir(opts);
    const auto prep = driver::prepare(config);

    auto matter = driver::make_thermal(config, prep);
    const auto trace =
        seq::run_sequence(matter, config.sequence, prep.guide, config.constants, config.solver);

    csv::Table table({"t_s", "com_rad", "R_1e_m", "sigma_m", "wrapped_flag"});
    for (const auto& s : trace.samples) {
        table.add(s.t);
        table.add(s.com);
        table.add(s.size);
        table.add(s.sigma);
        table.add_flag(s.wrapped);
    }
    table.write(dir / "ensemble.csv");
    write_manifest(dir, config, {"ensemble.csv"}, watch.seconds());
    return 0;
}

int cmd_evolve(const CommonOptions& opts) {
    Stopwatch watch;
    RunConfig config = load_and_finalize(opts);
    config.matter.kind = MatterKind::bec;
    ensure_valid(config);
    const auto dir = ensure_out_dir(opts);
    const auto prep = driver::prepare(config);

    auto matter = driver::make_bec(config, prep);
    const auto trace = seq::run_sequence(matter, config.sequence, prep.guide, config.constants,
                                         config.solver, driver::g1d_of(config, prep));

    csv::Table table({"t_s", "com_rad", "com_rad_per_s", "R_TF_m", "rms_m", "E_J"});
    for (const auto& s : trace.samples) {
        table.add(s.t);
        table.add(s.com);
        table.add(s.com_rate);
        table.add(s.size_ok ? csv::format_double(s.size) : std::string("nan"));
        table.add(s.sigma);
        table.add(s.energy);
    }
    table.write(dir / "evolve.csv");
    write_manifest(dir, config, {"evolve.csv"}, watch.seconds());
    return 0;
}

int cmd_fit(const CommonOptions& opts, const std::string& trace_path, double radius,
            const std::string& column, const std::string& kind) {
    Stopwatch watch;
    const auto parsed = csv::read_csv(trace_path);
    const auto ts = parsed.numeric_column("t_s");
    const auto sizes = parsed.numeric_column(column);
    if (radius <= 0.0) {
        if (opts.config_path.empty())
            throw ConfigError("fit needs --radius or --config for the ring radius");
        radius = load_and_finalize(opts).taap.ring_radius_target;
    }
    const MatterKind mk = kind == "bec" ? MatterKind::bec : MatterKind::thermal;

    const auto fit = analysis::fit_expansion(ts, sizes, radius);
    PhysicalConstants constants;  // energies reported for the default species
    const auto energy = analysis::kinetic_energy(fit, radius, mk, constants);

    const auto dir = ensure_out_dir(opts);
    ordered_json j = fit_to_json(fit, energy, constants);
    j["kind"] = kind;
    j["ring_radius_m"] = radius;
    j["trace"] = trace_path;
    j["column"] = column;
    write_json(dir / "fit.json", j);
    (void)watch;
    return 0;
}

namespace {

int scan_common(const CommonOptions& opts, const std::vector<double>& deltas,
                const std::string& csv_name, const std::string& json_name, bool fig4_columns) {
    Stopwatch watch;
    RunConfig config = load_and_finalize(opts);
    if (fig4_columns) config.matter.kind = MatterKind::thermal;
    ensure_valid(config);
    for (double d : deltas)
        if (d < 0.0 || d > config.sequence.max_tilt)
            throw ConfigError("scan tilt outside [0, sequence.max_tilt_rad]");
    const auto dir = ensure_out_dir(opts);
    const auto prep = driver::prepare(config);

    const auto result = analysis::scan_lens(config, prep, deltas, opts.threads);

    const auto& c = config.constants;
    if (fig4_columns) {
        csv::Table table({"delta_rad", "E_nK"});
        for (const auto& p : result.points) {
            table.add(p.delta);
            table.add(p.fit_ok ? csv::format_double(to_kelvin(p.e_kin, c) * 1e9)
                               : std::string("nan"));
        }
        table.write(dir / csv_name);
    } else {
        csv::Table table({"delta_rad", "E_J", "E_nK", "fit_ok"});
        for (const auto& p : result.points) {
            table.add(p.delta);
            table.add(p.fit_ok ? csv::format_double(p.e_kin) : std::string("nan"));
            table.add(p.fit_ok ? csv::format_double(to_kelvin(p.e_kin, c) * 1e9)
                               : std::string("nan"));
            table.add_flag(p.fit_ok);
        }
        table.write(dir / csv_name);
    }

    ordered_json j;
    j["points"] = result.points.size();
    if (result.has_best) {
        j["delta_star_rad"] = result.best_delta;
        j["E_star_J"] = result.best_energy;
        j["E_star_nK"] = to_kelvin(result.best_energy, c) * 1e9;
    }
    write_json(dir / json_name, j);
    write_manifest(dir, config, {csv_name, json_name}, watch.seconds());
    return 0;
}

}  // namespace

int cmd_scan(const CommonOptions& opts, double from, double to, int points) {
    if (points < 2) throw ConfigError("scan needs at least 2 points");
    std::vector<double> deltas(points);
    for (int i = 0; i < points; ++i) deltas[i] = from + (to - from) * i / (points - 1);
    return scan_common(opts, deltas, "scan.csv", "scan.json", false);
}

int cmd_optimize(const CommonOptions& opts, double lo, double hi, double tol) {
    Stopwatch watch;
    RunConfig config = load_and_finalize(opts);
    ensure_valid(config);
    const auto dir = ensure_out_dir(opts);
    const auto prep = driver::prepare(config);

    const auto result = analysis::optimize_delta(config, prep, lo, hi, tol);

    ordered_json j;
    j["delta_star_rad"] = result.delta_star;
    j["E_J"] = result.energy;
    j["E_nK"] = to_kelvin(result.energy, config.constants) * 1e9;
    j["evaluations"] = result.evaluations;
    write_json(dir / "optimize.json", j);
    write_manifest(dir, config, {"optimize.json"}, watch.seconds());
    return 0;
}

int cmd_repro_fig3(const CommonOptions& opts, double bec_atoms, double thermal_atoms) {
    Stopwatch watch;
    RunConfig base = load_and_finalize(opts);
    ensure_valid(base);
    const int lens_at = lens_stage_index(base.sequence);
    if (lens_at < 0) throw ConfigError("repro-fig3 needs a lens stage in the sequence");
    const auto dir = ensure_out_dir(opts);
    const auto prep = driver::prepare(base);
    const int launch_at = launch_stage_index(base.sequence);

    csv::Table table({"t_s", "size_m", "matter", "lensed"});
    ordered_json j;

    struct Arm {
        const char* matter;
        bool lensed;
    };
    const Arm arms[] = {{"thermal", false}, {"thermal", true}, {"bec", false}, {"bec", true}};

    double e_free_thermal = 0.0, e_lens_thermal = 0.0;
    double e_free_bec = 0.0, e_lens_bec = 0.0;

    for (const auto& arm : arms) {
        RunConfig config = base;
        const bool thermal = std::string(arm.matter) == "thermal";
        config.matter.kind = thermal ? MatterKind::thermal : MatterKind::bec;
        config.matter.atom_number = thermal ? thermal_atoms : bec_atoms;
        if (!arm.lensed) std::get<LensStage>(config.sequence.stages[lens_at]).delta = 0.0;

        std::cerr << "fig3 arm: " << arm.matter << (arm.lensed ? " lensed" : " free") << "\n";
        const auto trace = run_any(config, prep);

        for (const auto& s : trace.samples) {
            if (s.stage.rfind("expand", 0) != 0 || !s.size_ok) continue;
            table.add(s.t);
            table.add(s.size);
            table.add(std::string(arm.matter));
            table.add_flag(arm.lensed);
        }

        std::vector<double> ts, sizes;
        collect_window(trace, lens_at, -1, thermal, ts, sizes);
        const std::string key =
            std::string(arm.matter) + (arm.lensed ? "_lensed" : "_free");
        try {
            const auto fit = analysis::fit_expansion(ts, sizes, prep.guide.radius);
            const auto energy = analysis::kinetic_energy(fit, prep.guide.radius,
                                                         config.matter.kind, config.constants);
            j[key] = fit_to_json(fit, energy, config.constants);
            if (thermal) (arm.lensed ? e_lens_thermal : e_free_thermal) = energy.e_kin;
            else (arm.lensed ? e_lens_bec : e_free_bec) = energy.e_kin;
        } catch (const FitError& e) {
            j[key] = {{"error", e.what()}};
        }
    }
    (void)launch_at;

    if (e_lens_thermal > 0.0) j["cooling_factor_thermal"] = e_free_thermal / e_lens_thermal;
    if (e_lens_bec > 0.0) j["cooling_factor_bec"] = e_free_bec / e_lens_bec;

    table.write(dir / "fig3.csv");
    write_json(dir / "fig3.json", j);
    write_manifest(dir, base, {"fig3.csv", "fig3.json"}, watch.seconds());
    return 0;
}

int cmd_repro_fig4(const CommonOptions& opts, int points) {
    if (points < 12) throw ConfigError("repro-fig4 needs at least 12 scan points");
    std::vector<double> deltas(points);
    for (int i = 0; i < points; ++i) deltas[i] = 0.150 * i / (points - 1);
    return scan_common(opts, deltas, "fig4.csv", "fig4.json", true);
}

}  // namespace ringlens::tools
