#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ringlens::tools {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    std::int64_t seed = -1;  // -1 keeps the config's seed
    int threads = 1;
};

int cmd_validate(const CommonOptions& opts);
int cmd_potential_map(const CommonOptions& opts, const std::string& kind, int samples);
int cmd_groundstate(const CommonOptions& opts);
int cmd_simulate(const CommonOptions& opts);
int cmd_ensemble(const CommonOptions& opts);
int cmd_evolve(const CommonOptions& opts);
int cmd_fit(const CommonOptions& opts, const std::string& trace_path, double radius,
            const std::string& column, const std::string& kind);
int cmd_scan(const CommonOptions& opts, double from, double to, int points);
int cmd_optimize(const CommonOptions& opts, double lo, double hi, double tol);
int cmd_repro_fig3(const CommonOptions& opts, double bec_atoms, double thermal_atoms);
int cmd_repro_fig4(const CommonOptions& opts, int points);

}  // namespace ringlens::tools
