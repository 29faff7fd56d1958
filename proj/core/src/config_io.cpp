#include "ringlens/config_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ringlens/csv.hpp"
#include "ringlens/errors.hpp"

namespace ringlens {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (...) {
        throw ConfigError("bad numeric value for '" + key + "': " + text);
    }
}

long long parse_int(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (...) {
        throw ConfigError("bad integer value for '" + key + "': " + text);
    }
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("bad boolean value for '" + key + "': " + text);
}

Stage parse_stage(const std::string& spec) {
    std::istringstream in(spec);
    std::string type;
    in >> type;

    auto fields = [&](auto&& assign) {
        std::string token;
        while (in >> token) {
            auto eq = token.find('=');
            if (eq == std::string::npos)
                throw ConfigError("stage field must be key=value: " + token);
            const std::string key = token.substr(0, eq);
            const double value = parse_double("stage " + type + "." + key, token.substr(eq + 1));
            if (!assign(key, value))
                throw ConfigError("unknown field '" + key + "' for stage '" + type + "'");
        }
    };

    if (type == "hold") {
        HoldStage s;
        fields([&](const std::string& k, double v) {
            if (k == "omega") s.trap_omega = v;
            else if (k == "duration") s.duration = v;
            else return false;
            return true;
        });
        return s;
    }
    if (type == "launch") {
        LaunchStage s;
        fields([&](const std::string& k, double v) {
            if (k == "v") s.v_target = v;
            else if (k == "delta_max") s.delta_max = v;
            else return false;
            return true;
        });
        return s;
    }
    if (type == "expand") {
        ExpandStage s;
        fields([&](const std::string& k, double v) {
            if (k == "duration") s.duration = v;
            else return false;
            return true;
        });
        return s;
    }
    if (type == "lens") {
        LensStage s;
        fields([&](const std::string& k, double v) {
            if (k == "delta") s.delta = v;
            else if (k == "tau") s.tau = v;
            else return false;
            return true;
        });
        return s;
    }
    if (type == "release") {
        ReleaseStage s;
        fields([&](const std::string& k, double v) {
            if (k == "tof") s.tof = v;
            else return false;
            return true;
        });
        return s;
    }
    throw ConfigError("unknown stage type: " + type);
}

std::string stage_to_string(const Stage& stage) {
    using csv::format_double;
    std::string out;
    if (const auto* h = std::get_if<HoldStage>(&stage)) {
        out = "hold omega=" + format_double(h->trap_omega) +
              " duration=" + format_double(h->duration);
    } else if (const auto* l = std::get_if<LaunchStage>(&stage)) {
        out = "launch v=" + format_double(l->v_target) +
              " delta_max=" + format_double(l->delta_max);
    } else if (const auto* e = std::get_if<ExpandStage>(&stage)) {
        out = "expand duration=" + format_double(e->duration);
    } else if (const auto* p = std::get_if<LensStage>(&stage)) {
        out = "lens delta=" + format_double(p->delta) + " tau=" + format_double(p->tau);
    } else if (const auto* r = std::get_if<ReleaseStage>(&stage)) {
        out = "release tof=" + format_double(r->tof);
    }
    return out;
}

/// Applies one (section, key, value) assignment. Stage lines are handled
/// by the caller. Returns false for unknown keys.
bool assign(RunConfig& c, const std::string& section, const std::string& key,
            const std::string& value) {
    const std::string q = section.empty() ? key : section + "." + key;
    if (section.empty()) {
        if (key == "seed") {
            c.seed = static_cast<std::uint64_t>(parse_int(q, value));
            return true;
        }
        return false;
    }
    if (section == "constants") {
        auto& k = c.constants;
        if (key == "atom_mass_kg") k.atom_mass = parse_double(q, value);
        else if (key == "gravity_m_per_s2") k.gravity = parse_double(q, value);
        else if (key == "hbar_J_s") k.hbar = parse_double(q, value);
        else if (key == "boltzmann_J_per_K") k.k_boltzmann = parse_double(q, value);
        else if (key == "scattering_length_m") k.scattering_length = parse_double(q, value);
        else return false;
        return true;
    }
    if (section == "taap") {
        auto& t = c.taap;
        if (key == "quadrupole_gradient_T_per_m") t.quadrupole_gradient = parse_double(q, value);
        else if (key == "rf_frequency_rad_per_s") t.rf_frequency = parse_double(q, value);
        else if (key == "rabi_frequency_rad_per_s") t.rabi_frequency = parse_double(q, value);
        else if (key == "audio_amplitude_T") t.audio_amplitude = parse_double(q, value);
        else if (key == "audio_frequency_rad_per_s") t.audio_frequency = parse_double(q, value);
        else if (key == "dressed_moment_J_per_T") t.dressed_moment = parse_double(q, value);
        else if (key == "tilt_rad") t.tilt = parse_double(q, value);
        else if (key == "tilt_azimuth_rad") t.tilt_azimuth = parse_double(q, value);
        else if (key == "ring_radius_target_m") t.ring_radius_target = parse_double(q, value);
        else if (key == "auto_calibrate") t.auto_calibrate = parse_bool(q, value);
        else return false;
        return true;
    }
    if (section == "solver") {
        auto& s = c.solver;
        if (key == "grid_points") s.grid_points = static_cast<int>(parse_int(q, value));
        else if (key == "time_step_s") s.time_step = parse_double(q, value);
        else if (key == "imaginary_time_tolerance")
            s.imaginary_time_tolerance = parse_double(q, value);
        else if (key == "ensemble_size") s.ensemble_size = static_cast<int>(parse_int(q, value));
        else if (key == "sample_interval_s") s.sample_interval = parse_double(q, value);
        else if (key == "imag_time_step_s") s.imag_time_step = parse_double(q, value);
        else if (key == "max_imag_steps") s.max_imag_steps = static_cast<int>(parse_int(q, value));
        else return false;
        return true;
    }
    if (section == "matter") {
        auto& m = c.matter;
        if (key == "kind") {
            if (value == "thermal") m.kind = MatterKind::thermal;
            else if (value == "bec") m.kind = MatterKind::bec;
            else throw ConfigError("matter.kind must be 'thermal' or 'bec', got: " + value);
        } else if (key == "atom_number") {
            m.atom_number = parse_double(q, value);
        } else if (key == "temperature_K") {
            m.temperature = parse_double(q, value);
        } else if (key == "omega_perp_rad_per_s") {
            m.omega_perp = parse_double(q, value);
        } else {
            return false;
        }
        return true;
    }
    if (section == "sequence") {
        if (key == "max_tilt_rad") {
            c.sequence.max_tilt = parse_double(q, value);
            return true;
        }
        return false;  // 'stage' handled by the caller
    }
    return false;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    bool stages_reset = false;
    int line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header on line " + std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "constants" && section != "taap" && section != "solver" &&
                section != "matter" && section != "sequence")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value on line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (section == "sequence" && key == "stage") {
            if (!stages_reset) {
                config.sequence.stages.clear();
                stages_reset = true;
            }
            config.sequence.stages.push_back(parse_stage(value));
            continue;
        }
        if (!assign(config, section, key, value))
            throw ConfigError("unknown key '" + (section.empty() ? key : section + "." + key) +
                              "' on line " + std::to_string(line_no));
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    using csv::format_double;
    std::ostringstream out;
    out << "seed = " << c.seed << "\n";
    out << "\n[constants]\n";
    out << "atom_mass_kg = " << format_double(c.constants.atom_mass) << "\n";
    out << "gravity_m_per_s2 = " << format_double(c.constants.gravity) << "\n";
    out << "hbar_J_s = " << format_double(c.constants.hbar) << "\n";
    out << "boltzmann_J_per_K = " << format_double(c.constants.k_boltzmann) << "\n";
    out << "scattering_length_m = " << format_double(c.constants.scattering_length) << "\n";
    out << "\n[taap]\n";
    out << "quadrupole_gradient_T_per_m = " << format_double(c.taap.quadrupole_gradient) << "\n";
    out << "rf_frequency_rad_per_s = " << format_double(c.taap.rf_frequency) << "\n";
    out << "rabi_frequency_rad_per_s = " << format_double(c.taap.rabi_frequency) << "\n";
    out << "audio_amplitude_T = " << format_double(c.taap.audio_amplitude) << "\n";
    out << "audio_frequency_rad_per_s = " << format_double(c.taap.audio_frequency) << "\n";
    out << "dressed_moment_J_per_T = " << format_double(c.taap.dressed_moment) << "\n";
    out << "tilt_rad = " << format_double(c.taap.tilt) << "\n";
    out << "tilt_azimuth_rad = " << format_double(c.taap.tilt_azimuth) << "\n";
    out << "ring_radius_target_m = " << format_double(c.taap.ring_radius_target) << "\n";
    out << "auto_calibrate = " << (c.taap.auto_calibrate ? "true" : "false") << "\n";
    out << "\n[solver]\n";
    out << "grid_points = " << c.solver.grid_points << "\n";
    out << "time_step_s = " << format_double(c.solver.time_step) << "\n";
    out << "imaginary_time_tolerance = " << format_double(c.solver.imaginary_time_tolerance)
        << "\n";
    out << "ensemble_size = " << c.solver.ensemble_size << "\n";
    out << "sample_interval_s = " << format_double(c.solver.sample_interval) << "\n";
    out << "imag_time_step_s = " << format_double(c.solver.imag_time_step) << "\n";
    out << "max_imag_steps = " << c.solver.max_imag_steps << "\n";
    out << "\n[matter]\n";
    out << "kind = " << (c.matter.kind == MatterKind::bec ? "bec" : "thermal") << "\n";
    out << "atom_number = " << format_double(c.matter.atom_number) << "\n";
    out << "temperature_K = " << format_double(c.matter.temperature) << "\n";
    out << "omega_perp_rad_per_s = " << format_double(c.matter.omega_perp) << "\n";
    out << "\n[sequence]\n";
    out << "max_tilt_rad = " << format_double(c.sequence.max_tilt) << "\n";
    for (const auto& stage : c.sequence.stages) out << "stage = " << stage_to_string(stage) << "\n";
    return out.str();
}

void apply_override(RunConfig& config, const std::string& key_equals_value) {
    auto eq = key_equals_value.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must be key=value: " + key_equals_value);
    const std::string path = trim(key_equals_value.substr(0, eq));
    const std::string value = trim(key_equals_value.substr(eq + 1));

    auto dot = path.find('.');
    if (dot == std::string::npos) {
        if (!assign(config, "", path, value)) throw ConfigError("unknown override key: " + path);
        return;
    }
    const std::string section = path.substr(0, dot);
    const std::string rest = path.substr(dot + 1);

    // sequence.stageN.field
    if (section == "sequence" && rest.rfind("stage", 0) == 0 && rest.find('.') != std::string::npos) {
        auto dot2 = rest.find('.');
        const std::string idx_text = rest.substr(5, dot2 - 5);
        const std::string field = rest.substr(dot2 + 1);
        const std::size_t idx = static_cast<std::size_t>(parse_int("stage index", idx_text));
        if (idx >= config.sequence.stages.size())
            throw ConfigError("stage index out of range: " + path);
        Stage& stage = config.sequence.stages[idx];
        const double v = parse_double(path, value);
        bool ok = false;
        if (auto* h = std::get_if<HoldStage>(&stage)) {
            if (field == "omega") h->trap_omega = v, ok = true;
            else if (field == "duration") h->duration = v, ok = true;
        } else if (auto* l = std::get_if<LaunchStage>(&stage)) {
            if (field == "v") l->v_target = v, ok = true;
            else if (field == "delta_max") l->delta_max = v, ok = true;
        } else if (auto* e = std::get_if<ExpandStage>(&stage)) {
            if (field == "duration") e->duration = v, ok = true;
        } else if (auto* p = std::get_if<LensStage>(&stage)) {
            if (field == "delta") p->delta = v, ok = true;
            else if (field == "tau") p->tau = v, ok = true;
        } else if (auto* r = std::get_if<ReleaseStage>(&stage)) {
            if (field == "tof") r->tof = v, ok = true;
        }
        if (!ok) throw ConfigError("unknown stage field in override: " + path);
        return;
    }

    if (!assign(config, section, rest, value))
        throw ConfigError("unknown override key: " + path);
}

}  // namespace ringlens
