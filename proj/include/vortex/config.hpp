#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vortex/channel.hpp"
#include "vortex/estimator.hpp"

namespace vortex {

enum class ExperimentKind { angle_sweep, ccdf, subcarrier_sweep, antenna_sweep, imi_demo, validate_model };

std::string_view to_string(ExperimentKind kind);
// Accepts the CLI spelling ("angle-sweep", ...). Throws Error(config) otherwise.
ExperimentKind parse_experiment_kind(std::string_view name);

std::string_view to_string(ChannelModel model);
ChannelModel parse_channel_model(std::string_view name);
std::string_view to_string(Weighting weighting);
Weighting parse_weighting(std::string_view name);

// Receiver orientation as Y-then-X tilt angles, plus the resulting (theta, phi).
struct PoseSpec {
    double rot_y_deg = 0.0;
    double rot_x_deg = 0.0;
};

struct RingSpec {
    int n = 0;
    double radius_m = 0.0;
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::angle_sweep;
    Scenario scenario; // pose is unused; poses below supply the orientation
    double distance_m = 0.4;
    std::vector<PoseSpec> poses;

    std::vector<int> modes; // estimation modes
    int q = 6;
    int p = 1;
    Weighting weighting = Weighting::amplitude;
    double grid_deg = 3.0;
    double tolerance = 1e-10;
    int max_iterations = 200;

    std::optional<double> snr_db; // empty means noiseless
    int trials = 50;
    std::uint64_t seed = 1;
    ChannelModel model = ChannelModel::exact;

    std::vector<int> p_values{1, 2, 4, 8, 16, 32, 64};
    std::vector<int> q_values{3, 4, 5, 6, 7, 8, 9, 10, 11, 12};

    std::vector<int> imi_modes{-2, -1, 0, 1, 2};
    double imi_tilt_deg = 10.0;

    std::vector<RingSpec> validation_rings;
    std::vector<int> validation_modes{-2, -1, 0, 1, 2};
    std::vector<PoseSpec> validation_poses;
    double validation_near_distance_m = 1.0;

    nlohmann::json effective;  // fully populated config, the hash input
    std::string hash;          // 16 hex digits
};

// Fifteen Y/X rotation pairs from {0, 20, 40, 60} degrees, aligned pose excluded.
std::vector<PoseSpec> default_pose_grid();

// Builds an ExperimentSpec from a parsed config document. Missing keys take defaults;
// malformed or out-of-range values throw Error(config).
ExperimentSpec parse_spec(ExperimentKind kind, const nlohmann::json& config);
nlohmann::json read_config_file(const std::string& path);
ExperimentSpec load_spec(ExperimentKind kind, const std::string& path);

// 64-bit FNV-1a over bytes, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

} // namespace vortex
