#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vortex {

enum class ErrorCode {
    invalid_argument,
    geometry_overlap,
    farfield_violation,
    missing_samples,
    zero_power,
    infeasible,
    degenerate_geometry,
    no_power,
    aliased_mode,
    zero_signal,
    config,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; the code identifies the
// failure class so callers (the CLI in particular) can map it to exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::invalid_argument: return "INVALID_ARGUMENT";
    case ErrorCode::geometry_overlap: return "GEOMETRY_OVERLAP";
    case ErrorCode::farfield_violation: return "FARFIELD_VIOLATION";
    case ErrorCode::missing_samples: return "MISSING_SAMPLES";
    case ErrorCode::zero_power: return "ZERO_POWER";
    case ErrorCode::infeasible: return "INFEASIBLE";
    case ErrorCode::degenerate_geometry: return "DEGENERATE_GEOMETRY";
    case ErrorCode::no_power: return "NO_POWER";
    case ErrorCode::aliased_mode: return "ALIASED_MODE";
    case ErrorCode::zero_signal: return "ZERO_SIGNAL";
    case ErrorCode::config: return "CONFIG";
    }
    return "UNKNOWN";
}

} // namespace vortex
