#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vortex/config.hpp"
#include "vortex/error.hpp"
#include "vortex/experiments.hpp"
#include "vortex/report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"OAM misalignment estimation and correction experiments"};
    std::string kind_name;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    std::optional<int> trials;
    std::optional<double> snr_db;
    std::optional<std::string> model;

    app.add_option("experiment-kind", kind_name,
                   "angle-sweep | ccdf | subcarrier-sweep | antenna-sweep | imi-demo | validate-model")
        ->required();
    app.add_option("--config", config_path, "JSON scenario and experiment config")->required();
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--trials", trials, "trials per point");
    app.add_option("--snr-db", snr_db, "measurement SNR in dB");
    app.add_option("--model", model, "channel model: exact | farfield");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    vortex::ExperimentSpec spec;
    try {
        const auto kind = vortex::parse_experiment_kind(kind_name);
        nlohmann::json doc = vortex::read_config_file(config_path);
        if (!doc.is_object()) throw vortex::Error(vortex::ErrorCode::config, "config root must be an object");
        if (seed) doc["seed"] = *seed;
        if (trials) doc["trials"] = *trials;
        if (snr_db) doc["noise"]["snr_db"] = *snr_db;
        if (model) doc["model"] = *model;
        spec = vortex::parse_spec(kind, doc);
    } catch (const vortex::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const auto result = vortex::run_experiment(spec);
        const auto written = vortex::write_outputs(result, spec, out_dir);
        std::cout << result.summary.dump(2) << '\n';
        for (const auto& p : written) std::cout << "wrote " << p.string() << '\n';
    } catch (const vortex::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == vortex::ErrorCode::config ? kExitConfig : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
