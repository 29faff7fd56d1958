#include "manifest.hpp"

#include <json.hpp>

#include "ringlens/config_io.hpp"
#include "ringlens/csv.hpp"
#include "sha256.hpp"

namespace ringlens::tools {

void write_manifest(const std::filesystem::path& out_dir, const RunConfig& config,
                    const std::vector<std::string>& outputs, double wall_time_s) {
    nlohmann::ordered_json j;
    j["config_hash"] = Sha256::hash(serialize_config(config));
    j["tool_version"] = kToolVersion;
    j["seed"] = config.seed;
    j["outputs"] = outputs;
    j["wall_time_s"] = wall_time_s;
    csv::write_text_atomic(out_dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace ringlens::tools
