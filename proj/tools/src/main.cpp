#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ringlens/errors.hpp"

using ringlens::tools::CommonOptions;

namespace {

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_config = true) {
    if (with_config)
        cmd->add_option("config", opts.config_path, "run configuration file")->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "override the config seed");
    cmd->add_option("--threads", opts.threads, "worker threads for scans");
    cmd->add_option("--override", opts.overrides,
                    "dot-path config override, e.g. taap.tilt_rad=0.089");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ring-waveguide matterwave optics simulator"};
    app.require_subcommand(1);

    CommonOptions opts;
    int exit_code = 0;

    auto* validate = app.add_subcommand("validate", "check a configuration file");
    add_common(validate, opts);
    validate->callback([&] { exit_code = ringlens::tools::cmd_validate(opts); });

    std::string map_kind = "guide";
    int map_samples = 512;
    auto* pmap = app.add_subcommand("potential-map", "emit the trapping potential as CSV");
    add_common(pmap, opts);
    pmap->add_option("--kind", map_kind, "'guide' (phi profile) or 'plane' (x-y map)");
    pmap->add_option("--samples", map_samples, "samples per axis");
    pmap->callback(
        [&] { exit_code = ringlens::tools::cmd_potential_map(opts, map_kind, map_samples); });

    auto* gs = app.add_subcommand("groundstate", "condensate ground state in the loading trap");
    add_common(gs, opts);
    gs->callback([&] { exit_code = ringlens::tools::cmd_groundstate(opts); });

    auto* sim = app.add_subcommand("simulate", "run the configured sequence and fit expansions");
    add_common(sim, opts);
    sim->callback([&] { exit_code = ringlens::tools::cmd_simulate(opts); });

    auto* ens = app.add_subcommand("ensemble", "thermal-cloud trace of the configured sequence");
    add_common(ens, opts);
    ens->callback([&] { exit_code = ringlens::tools::cmd_ensemble(opts); });

    auto* evo = app.add_subcommand("evolve", "condensate trace of the configured sequence");
    add_common(evo, opts);
    evo->callback([&] { exit_code = ringlens::tools::cmd_evolve(opts); });

    std::string fit_trace, fit_column = "size_m", fit_kind = "thermal";
    double fit_radius = 0.0;
    auto* fit = app.add_subcommand("fit", "fit an expansion trace CSV");
    fit->add_option("trace", fit_trace, "trace CSV with a t_s column")->required();
    fit->add_option("--config", opts.config_path, "config supplying the ring radius");
    fit->add_option("--radius", fit_radius, "ring radius in m");
    fit->add_option("--column", fit_column, "size column to fit");
    fit->add_option("--kind", fit_kind, "'thermal' or 'bec' energy formula");
    fit->add_option("--out", opts.out_dir, "output directory");
    fit->callback([&] {
        exit_code = ringlens::tools::cmd_fit(opts, fit_trace, fit_radius, fit_column, fit_kind);
    });

    double scan_from = 0.0, scan_to = 0.15;
    int scan_points = 13;
    auto* scan = app.add_subcommand("scan", "post-lens energy versus lens tilt");
    add_common(scan, opts);
    scan->add_option("--from", scan_from, "first tilt, rad");
    scan->add_option("--to", scan_to, "last tilt, rad");
    scan->add_option("--points", scan_points, "number of tilt values");
    scan->callback(
        [&] { exit_code = ringlens::tools::cmd_scan(opts, scan_from, scan_to, scan_points); });

    double opt_lo = 0.005, opt_hi = 0.15, opt_tol = 0.001;
    auto* opt = app.add_subcommand("optimize", "golden-section search for the best lens tilt");
    add_common(opt, opts);
    opt->add_option("--lo", opt_lo, "lower tilt bound, rad");
    opt->add_option("--hi", opt_hi, "upper tilt bound, rad");
    opt->add_option("--tol", opt_tol, "tilt tolerance, rad");
    opt->callback(
        [&] { exit_code = ringlens::tools::cmd_optimize(opts, opt_lo, opt_hi, opt_tol); });

    double fig3_bec = 1e4, fig3_thermal = 3e4;
    auto* fig3 = app.add_subcommand(
        "repro-fig3", "four-arm run: bec/thermal with and without the lens pulse");
    add_common(fig3, opts);
    fig3->add_option("--bec-atoms", fig3_bec, "condensate atom number");
    fig3->add_option("--thermal-atoms", fig3_thermal, "thermal-cloud atom number");
    fig3->callback(
        [&] { exit_code = ringlens::tools::cmd_repro_fig3(opts, fig3_bec, fig3_thermal); });

    int fig4_points = 13;
    auto* fig4 = app.add_subcommand("repro-fig4", "thermal lens-strength scan, 0-150 mrad");
    add_common(fig4, opts);
    fig4->add_option("--points", fig4_points, "number of tilt values (>= 12)");
    fig4->callback([&] { exit_code = ringlens::tools::cmd_repro_fig4(opts, fig4_points); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // prints usage; nonzero on bad flags
    } catch (const ringlens::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
