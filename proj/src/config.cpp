#include "vortex/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "vortex/correction.hpp"
#include "vortex/error.hpp"

namespace vortex {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::config, what); }

const json* find(const json& obj, const char* key)
{
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

double number(const json& obj, const char* key, double fallback)
{
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number()) fail(std::string("'") + key + "' must be a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(std::string("'") + key + "' must be finite");
    return x;
}

int integer(const json& obj, const char* key, int fallback)
{
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(std::string("'") + key + "' must be an integer");
    return v->get<int>();
}

std::vector<int> int_list(const json& obj, const char* key, std::vector<int> fallback)
{
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_array()) fail(std::string("'") + key + "' must be a list of integers");
    std::vector<int> out;
    for (const auto& e : *v) {
        if (!e.is_number_integer()) fail(std::string("'") + key + "' must be a list of integers");
        out.push_back(e.get<int>());
    }
    return out;
}

RingSpec ring(const json& obj, const char* key, RingSpec fallback)
{
    const json* v = find(obj, key);
    if (!v) return fallback;
    RingSpec r{integer(*v, "n", fallback.n), number(*v, "radius_m", fallback.radius_m)};
    if (r.n < 1 || r.radius_m <= 0.0) fail(std::string("'") + key + "' needs n >= 1 and radius_m > 0");
    return r;
}

PoseSpec pose(const json& v)
{
    if (!v.is_object()) fail("each pose must be an object");
    const bool rot = find(v, "rot_y_deg") || find(v, "rot_x_deg");
    const bool ang = find(v, "theta_deg") || find(v, "phi_deg");
    if (rot && ang) fail("a pose gives either rot_y_deg/rot_x_deg or theta_deg/phi_deg, not both");
    if (ang) {
        const double theta = number(v, "theta_deg", 0.0);
        const double phi = number(v, "phi_deg", 0.0);
        if (theta < 0.0 || theta >= 90.0) fail("pose theta_deg must lie in [0, 90)");
        const TiltAngles t = tilt_for_angles(deg2rad(theta), deg2rad(phi));
        return {rad2deg(t.angle_y), rad2deg(t.angle_x)};
    }
    PoseSpec p{number(v, "rot_y_deg", 0.0), number(v, "rot_x_deg", 0.0)};
    if (std::abs(p.rot_y_deg) >= 90.0 || std::abs(p.rot_x_deg) >= 90.0)
        fail("pose rotations must lie strictly between -90 and 90 degrees");
    return p;
}

std::vector<PoseSpec> pose_list(const json& obj, const char* key, std::vector<PoseSpec> fallback)
{
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_array()) fail(std::string("'") + key + "' must be a list");
    std::vector<PoseSpec> out;
    for (const auto& e : *v) out.push_back(pose(e));
    if (out.empty()) fail(std::string("'") + key + "' must not be empty");
    return out;
}

json pose_json(const std::vector<PoseSpec>& poses)
{
    json out = json::array();
    for (const auto& p : poses) out.push_back({{"rot_y_deg", p.rot_y_deg}, {"rot_x_deg", p.rot_x_deg}});
    return out;
}

json ring_json(const UcaGeometry& g) { return {{"n", g.n_elements}, {"radius_m", g.radius}}; }

} // namespace

std::string_view to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::angle_sweep: return "angle-sweep";
    case ExperimentKind::ccdf: return "ccdf";
    case ExperimentKind::subcarrier_sweep: return "subcarrier-sweep";
    case ExperimentKind::antenna_sweep: return "antenna-sweep";
    case ExperimentKind::imi_demo: return "imi-demo";
    case ExperimentKind::validate_model: return "validate-model";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name)
{
    for (auto k : {ExperimentKind::angle_sweep, ExperimentKind::ccdf, ExperimentKind::subcarrier_sweep,
                   ExperimentKind::antenna_sweep, ExperimentKind::imi_demo, ExperimentKind::validate_model}) {
        if (to_string(k) == name) return k;
    }
    fail("unknown experiment kind '" + std::string(name) + "'");
}

std::string_view to_string(ChannelModel model) { return model == ChannelModel::exact ? "exact" : "farfield"; }

ChannelModel parse_channel_model(std::string_view name)
{
    if (name == "exact") return ChannelModel::exact;
    if (name == "farfield") return ChannelModel::farfield;
    fail("model must be 'exact' or 'farfield'");
}

std::string_view to_string(Weighting weighting)
{
    switch (weighting) {
    case Weighting::uniform: return "uniform";
    case Weighting::amplitude: return "amplitude";
    case Weighting::amplitude_squared: return "amplitude_squared";
    }
    return "unknown";
}

Weighting parse_weighting(std::string_view name)
{
    if (name == "uniform") return Weighting::uniform;
    if (name == "amplitude") return Weighting::amplitude;
    if (name == "amplitude_squared") return Weighting::amplitude_squared;
    fail("weighting must be 'uniform', 'amplitude' or 'amplitude_squared'");
}

std::vector<PoseSpec> default_pose_grid()
{
    std::vector<PoseSpec> grid;
    for (double y : {0.0, 20.0, 40.0, 60.0})
        for (double x : {0.0, 20.0, 40.0, 60.0})
            if (y != 0.0 || x != 0.0) grid.push_back({y, x});
    return grid;
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentSpec parse_spec(ExperimentKind kind, const json& config)
{
    if (!config.is_object()) fail("config root must be an object");
    ExperimentSpec spec;
    spec.kind = kind;

    const json empty = json::object();
    const json& sc = find(config, "scenario") ? config["scenario"] : empty;
    const RingSpec tx = ring(sc, "tx", {202, 0.04});
    const RingSpec rx = ring(sc, "rx", {20, 0.008});
    spec.distance_m = number(sc, "distance_m", 0.4);
    if (spec.distance_m <= 0.0) fail("distance_m must be positive");
    spec.scenario.tx = UcaGeometry{tx.n, tx.radius_m};
    spec.scenario.rx = UcaGeometry{rx.n, rx.radius_m};
    spec.scenario.carrier_hz = number(sc, "carrier_hz", 120e9);
    if (spec.scenario.carrier_hz <= 0.0) fail("carrier_hz must be positive");

    const json& sub = find(sc, "subcarriers") ? sc["subcarriers"] : empty;
    const double start = number(sub, "start_hz", 119.5e9);
    const double step = number(sub, "step_hz", 10e6);
    const int count = integer(sub, "count", 71);
    if (count < 1 || step <= 0.0 || start <= 0.0) fail("subcarriers need start_hz > 0, step_hz > 0 and count >= 1");
    for (int i = 0; i < count; ++i) spec.scenario.subcarriers_hz.push_back(start + step * i);
    spec.scenario.pose = RxPose::tilted(spec.distance_m, 0.0, 0.0);
    try {
        spec.scenario.validate();
    } catch (const Error& e) {
        fail(std::string("scenario: ") + e.what());
    }

    spec.poses = pose_list(config, "poses", default_pose_grid());

    const json& est = find(config, "estimation") ? config["estimation"] : empty;
    const json* modes = find(est, "modes");
    if (!modes || (modes->is_string() && modes->get<std::string>() == "auto")) {
        const auto [lo, hi] = select_modes(spec.scenario);
        spec.modes = {lo, hi};
    } else {
        spec.modes = int_list(est, "modes", {});
    }
    spec.q = integer(est, "q", 6);
    spec.p = integer(est, "p", 1);
    if (const json* w = find(est, "weighting")) {
        if (!w->is_string()) fail("weighting must be a string");
        spec.weighting = parse_weighting(w->get<std::string>());
    }
    spec.grid_deg = number(est, "grid_deg", 3.0);
    spec.tolerance = number(est, "tol", 1e-10);
    spec.max_iterations = integer(est, "max_iterations", 200);
    if (spec.grid_deg <= 0.0 || spec.grid_deg > 30.0) fail("grid_deg must lie in (0, 30]");
    if (spec.tolerance <= 0.0) fail("tol must be positive");
    if (spec.max_iterations < 1) fail("max_iterations must be >= 1");
    if (spec.p < 1 || spec.p > count) fail("p must lie in [1, subcarrier count]");
    try {
        EstimationConfig probe;
        probe.modes = spec.modes;
        probe.antennas = select_antennas(rx.n, spec.q);
        probe.subcarriers.assign(static_cast<std::size_t>(spec.p), 0);
        for (int i = 0; i < spec.p; ++i) probe.subcarriers[static_cast<std::size_t>(i)] = i;
        probe.validate(rx.n);
    } catch (const Error& e) {
        fail(std::string("estimation: ") + e.what());
    }
    for (int l : spec.modes)
        if (std::abs(l) > max_decodable_mode(rx.n)) fail("estimation mode exceeds the Rx sampling limit");

    const json& noise = find(config, "noise") ? config["noise"] : empty;
    if (const json* s = find(noise, "snr_db")) {
        if (!s->is_number()) fail("snr_db must be a number or null");
        spec.snr_db = s->get<double>();
    } else if (!find(config, "noise")) {
        spec.snr_db = 32.0;
    }

    spec.trials = integer(config, "trials", 50);
    if (spec.trials < 1) fail("trials must be >= 1");
    if (const json* s = find(config, "seed")) {
        if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0))
            fail("seed must be a non-negative integer");
        spec.seed = s->get<std::uint64_t>();
    }
    if (const json* m = find(config, "model")) {
        if (!m->is_string()) fail("model must be a string");
        spec.model = parse_channel_model(m->get<std::string>());
    }

    const json& sweep = find(config, "sweep") ? config["sweep"] : empty;
    spec.p_values = int_list(sweep, "p_values", spec.p_values);
    spec.q_values = int_list(sweep, "q_values", spec.q_values);
    for (int p : spec.p_values)
        if (kind == ExperimentKind::subcarrier_sweep && (p < 1 || p > count)) fail("sweep p_values must lie in [1, subcarrier count]");
    for (int q : spec.q_values)
        if (kind == ExperimentKind::antenna_sweep && (q < 3 || q > rx.n)) fail("sweep q_values must lie in [3, rx.n]");

    const json& imi = find(config, "imi") ? config["imi"] : empty;
    spec.imi_modes = int_list(imi, "modes", spec.imi_modes);
    spec.imi_tilt_deg = number(imi, "tilt_deg", spec.imi_tilt_deg);
    if (spec.imi_modes.empty()) fail("imi modes must not be empty");
    for (int l : spec.imi_modes)
        if (std::abs(l) > max_decodable_mode(rx.n)) fail("imi mode exceeds the Rx sampling limit");
    if (spec.imi_tilt_deg < 0.0 || spec.imi_tilt_deg >= 90.0) fail("imi tilt_deg must lie in [0, 90)");

    const json& val = find(config, "validation") ? config["validation"] : empty;
    if (const json* rings = find(val, "rings")) {
        if (!rings->is_array() || rings->empty()) fail("validation rings must be a non-empty list");
        for (const auto& r : *rings) {
            const json wrap = {{"r", r}};
            spec.validation_rings.push_back(ring(wrap, "r", {0, 0.0}));
        }
    } else {
        spec.validation_rings = {{120, 0.02}, {160, 0.03}, {200, 0.04}};
    }
    spec.validation_modes = int_list(val, "modes", spec.validation_modes);
    spec.validation_poses = pose_list(val, "poses", {{0.0, 0.0}});
    if (!find(val, "poses")) {
        const TiltAngles t = tilt_for_angles(deg2rad(17.9), deg2rad(-34.2));
        spec.validation_poses.push_back({rad2deg(t.angle_y), rad2deg(t.angle_x)});
    }
    spec.validation_near_distance_m = number(val, "near_distance_m", 1.0);
    if (spec.validation_near_distance_m <= 0.0) fail("near_distance_m must be positive");

    json eff;
    eff["experiment"] = std::string(to_string(kind));
    eff["scenario"] = {{"tx", ring_json(spec.scenario.tx)},
                       {"rx", ring_json(spec.scenario.rx)},
                       {"distance_m", spec.distance_m},
                       {"carrier_hz", spec.scenario.carrier_hz},
                       {"subcarriers", {{"start_hz", start}, {"step_hz", step}, {"count", count}}}};
    eff["poses"] = pose_json(spec.poses);
    eff["estimation"] = {{"modes", spec.modes},         {"q", spec.q},
                         {"p", spec.p},                 {"weighting", std::string(to_string(spec.weighting))},
                         {"grid_deg", spec.grid_deg},   {"tol", spec.tolerance},
                         {"max_iterations", spec.max_iterations}};
    eff["noise"] = {{"snr_db", spec.snr_db ? json(*spec.snr_db) : json(nullptr)}};
    eff["trials"] = spec.trials;
    eff["seed"] = spec.seed;
    eff["model"] = std::string(to_string(spec.model));
    eff["sweep"] = {{"p_values", spec.p_values}, {"q_values", spec.q_values}};
    eff["imi"] = {{"modes", spec.imi_modes}, {"tilt_deg", spec.imi_tilt_deg}};
    json rings = json::array();
    for (const auto& r : spec.validation_rings) rings.push_back({{"n", r.n}, {"radius_m", r.radius_m}});
    eff["validation"] = {{"rings", rings},
                         {"modes", spec.validation_modes},
                         {"poses", pose_json(spec.validation_poses)},
                         {"near_distance_m", spec.validation_near_distance_m}};
    spec.effective = eff;
    spec.hash = fnv1a_hex(eff.dump());
    return spec;
}

nlohmann::json read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail("cannot open config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        fail("cannot parse config '" + path + "': " + e.what());
    }
    return doc;
}

ExperimentSpec load_spec(ExperimentKind kind, const std::string& path) { return parse_spec(kind, read_config_file(path)); }

} // namespace vortex
