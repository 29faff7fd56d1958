#pragma once

#include <stdexcept>
#include <string>

namespace ringlens {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// |B| = 0 at an evaluation point: the adiabatic dressed-state picture
/// breaks down there, so the potential is refused rather than clamped.
struct DegenerateFieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnachievableLaunchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonUnimodalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ringlens
