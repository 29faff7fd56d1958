#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ringlens/constants.hpp"

namespace ringlens {

/// Field parameters defining the ring waveguide and the tilt lens.
///
/// The instantaneous magnetic field is a DC quadrupole B = b'(x, y, -2z)
/// plus a vertical audio-frequency bias B_m sin(w_m t) z_hat; an RF field
/// of Rabi frequency Omega_0 dresses the atoms at rf_frequency.
struct TaapConfig {
    double quadrupole_gradient = 0.9;              // b', T/m (radial)
    double rf_frequency = two_pi * 1.2e6;          // rad/s
    double rabi_frequency = two_pi * 5.0e4;        // Omega_0, rad/s
    double audio_amplitude = 1.7e-4;               // B_m, T
    double audio_frequency = two_pi * 5.0e3;       // w_m, rad/s
    double dressed_moment = 0.5 * bohr_magneton;   // mu_eff = m_F g_F mu_B, J/T
    double tilt = 0.0;                             // delta, rad
    double tilt_azimuth = 0.0;                     // phi_c, rad (downhill azimuth)
    double ring_radius_target = 485e-6;            // m, calibration target
    bool auto_calibrate = true;

    bool operator==(const TaapConfig&) const = default;
};

struct SolverParams {
    int grid_points = 4096;                 // N, power of two
    double time_step = 1.0e-5;              // s
    double imaginary_time_tolerance = 1e-10;  // relative energy change per step
    int ensemble_size = 100000;
    double sample_interval = 1.0e-3;        // s, trace sampling
    double imag_time_step = 1.0e-4;         // s, imaginary-time step
    int max_imag_steps = 200000;

    bool operator==(const SolverParams&) const = default;
};

enum class MatterKind { thermal, bec };

struct MatterSpec {
    MatterKind kind = MatterKind::thermal;
    double atom_number = 6.0e4;
    double temperature = 116e-9;            // K, thermal clouds only
    // Transverse confinement entering the 1D interaction strength. Zero
    // means "use the value extracted from the calibrated guide".
    double omega_perp = two_pi * 100.0;     // rad/s

    bool operator==(const MatterSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Sequence stages
// ---------------------------------------------------------------------------

struct HoldStage {
    double trap_omega = 42.4;   // rad/s, azimuthal well frequency
    double duration = 0.01;     // s
    bool operator==(const HoldStage&) const = default;
};

struct LaunchStage {
    double v_target = 0.031;    // m/s, tangential
    double delta_max = 0.150;   // rad, tilt available for the launch well
    bool operator==(const LaunchStage&) const = default;
};

struct ExpandStage {
    double duration = 0.066;    // s, waveguide free expansion (tilt off)
    bool operator==(const ExpandStage&) const = default;
};

struct LensStage {
    double delta = 0.070;       // rad
    double tau = 0.017;         // s, pulse duration
    bool operator==(const LensStage&) const = default;
};

struct ReleaseStage {
    double tof = 0.0;           // s, time-of-flight imaging emulation
    bool operator==(const ReleaseStage&) const = default;
};

using Stage = std::variant<HoldStage, LaunchStage, ExpandStage, LensStage, ReleaseStage>;

struct SequencePlan {
    std::vector<Stage> stages;
    double max_tilt = 0.20;     // rad, bound on any LensStage delta
    bool operator==(const SequencePlan&) const = default;
};

/// Plan used throughout the tests and as the shipped default: hold, launch,
/// first expansion, lens pulse, final expansion.
SequencePlan default_sequence();

// ---------------------------------------------------------------------------

struct RunConfig {
    PhysicalConstants constants;
    TaapConfig taap;
    SolverParams solver;
    MatterSpec matter;
    SequencePlan sequence = default_sequence();
    std::uint64_t seed = 1;

    bool operator==(const RunConfig&) const = default;
};

/// Checks every config invariant. Returns one human-readable line per
/// violation, empty when the config is valid. Never throws.
std::vector<std::string> validate(const RunConfig& config);

}  // namespace ringlens
