#include "vortex/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <thread>

#include "vortex/error.hpp"

namespace vortex {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Runs body(i) for i in [0, n) on all hardware threads. Each index writes
// only its own output slot, so the result does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct Stats {
    double mean = 0.0;
    double se = 0.0; // standard error of the mean
    double sd = 0.0;
    std::size_t n = 0;
};

Stats stats(const std::vector<double>& v)
{
    Stats s;
    s.n = v.size();
    if (v.empty()) return s;
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
        s.se = s.sd / std::sqrt(static_cast<double>(v.size()));
    }
    return s;
}

// Everything about one pose that does not depend on the noise draw.
struct PoseContext {
    PoseSpec spec;
    RxPose pose;
    MisalignmentAngles truth;
    SampleTensor clean; // all Rx elements, estimation modes, every subcarrier
    ImiMatrix before;
    ImiMatrix after_true;
    double k = 0.0;
};

std::vector<int> all_positions(std::size_t n)
{
    std::vector<int> out(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

std::vector<PoseContext> prepare_poses(const ExperimentSpec& spec)
{
    std::vector<PoseContext> ctx(spec.poses.size());
    const auto subs = all_positions(spec.scenario.subcarriers_hz.size());
    parallel_for(ctx.size(), [&](std::size_t i) {
        PoseContext& c = ctx[i];
        c.spec = spec.poses[i];
        c.pose = RxPose::tilted(spec.distance_m, deg2rad(c.spec.rot_y_deg), deg2rad(c.spec.rot_x_deg));
        c.truth = misalignment_angles(c.pose);
        c.k = spec.scenario.carrier_wavenumber();
        c.clean = simulate_measurement(spec.scenario, c.pose, spec.modes, subs, NoiseSpec::none(), spec.model);
        c.before = imi_matrix(spec.scenario, c.pose, spec.modes, spec.modes, nullptr, spec.model, c.k);
        const PhaseMask mask = phase_mask(c.truth.theta, c.truth.phi, c.k, spec.scenario.rx);
        c.after_true = imi_matrix(spec.scenario, c.pose, spec.modes, spec.modes, &mask, spec.model, c.k);
    });
    return ctx;
}

struct TrialSetup {
    ExperimentKind kind;
    int point = 0;
    int trial = 0;
    int pose = 0;
    int p = 1;
    int q = 6;
    bool random_subcarriers = false;
};

ResultRow run_trial(const ExperimentSpec& spec, const PoseContext& ctx, const TrialSetup& t)
{
    ResultRow row;
    row.kind = t.kind;
    row.point = t.point;
    row.trial = t.trial;
    row.pose = t.pose;
    row.theta_true_deg = rad2deg(ctx.truth.theta);
    row.phi_true_deg = rad2deg(ctx.truth.phi);
    row.p = t.p;
    row.q = t.q;
    row.u = static_cast<int>(spec.modes.size());
    row.seed = trial_seed(spec.seed, t.point, t.trial);
    const ResultRow base = row;

    try {
        std::vector<int> subs;
        const int n_sub = static_cast<int>(ctx.clean.n_subcarriers());
        if (!t.random_subcarriers && t.p == 1) {
            subs = {spec.scenario.nearest_subcarrier_to_carrier()};
        } else {
            subs = all_positions(static_cast<std::size_t>(n_sub));
            std::mt19937_64 rng(splitmix64(row.seed ^ 0x5ca1ab1e0ddba11ULL));
            std::shuffle(subs.begin(), subs.end(), rng);
            subs.resize(static_cast<std::size_t>(t.p));
            std::sort(subs.begin(), subs.end());
        }
        SampleTensor tensor = ctx.clean.select_subcarriers(subs);
        if (spec.snr_db) add_noise(tensor, NoiseSpec::with_snr_db(*spec.snr_db, row.seed));

        EstimationConfig cfg;
        cfg.modes = spec.modes;
        cfg.antennas = select_antennas(spec.scenario.rx.n_elements, t.q);
        cfg.subcarriers = all_positions(subs.size());
        cfg.weighting = spec.weighting;
        cfg.grid_theta_deg = cfg.grid_phi_deg = cfg.grid_gamma_deg = spec.grid_deg;
        cfg.tolerance = spec.tolerance;
        cfg.max_iterations = spec.max_iterations;
        const MisalignmentEstimate est = estimate(tensor, spec.scenario, cfg);

        const PhaseMask mask = phase_mask(est.theta, est.phi, ctx.k, spec.scenario.rx);
        const ImiMatrix after = imi_matrix(spec.scenario, ctx.pose, spec.modes, spec.modes, &mask, spec.model, ctx.k);

        row.theta_est_deg = rad2deg(est.theta);
        row.phi_est_deg = rad2deg(wrap_pi(est.phi));
        row.theta_err_deg = std::abs(row.theta_est_deg - row.theta_true_deg);
        row.phi_err_deg = rad2deg(circular_distance(est.phi, ctx.truth.phi));
        row.sir_before_db = sir(ctx.before).average_db;
        row.sir_after_db = sir(after).average_db;
        row.sir_after_true_db = sir(ctx.after_true).average_db;
        row.capacity_before = capacity(ctx.before);
        row.capacity_after = capacity(after);
        row.capacity_after_true = capacity(ctx.after_true);
    } catch (const Error& e) {
        row = base;
        row.status = std::string(to_string(e.code()));
    }
    return row;
}

std::vector<ResultRow> run_trials(const ExperimentSpec& spec, const std::vector<PoseContext>& ctx,
                                  const std::vector<TrialSetup>& setups)
{
    std::vector<ResultRow> rows(setups.size());
    parallel_for(setups.size(), [&](std::size_t i) {
        rows[i] = run_trial(spec, ctx[static_cast<std::size_t>(setups[i].pose)], setups[i]);
    });
    return rows;
}

std::vector<const ResultRow*> ok_rows(const std::vector<ResultRow>& rows)
{
    std::vector<const ResultRow*> out;
    for (const auto& r : rows)
        if (r.ok()) out.push_back(&r);
    return out;
}

template <class F>
std::vector<double> column(const std::vector<const ResultRow*>& rows, F f)
{
    std::vector<double> out;
    out.reserve(rows.size());
    for (const ResultRow* r : rows) out.push_back(f(*r));
    return out;
}

double sir_gain_of(const ResultRow& r) { return r.sir_after_db - r.sir_before_db; }
double sir_gain_true_of(const ResultRow& r) { return r.sir_after_true_db - r.sir_before_db; }
double capacity_ratio_of(const ResultRow& r) { return r.capacity_after / r.capacity_before; }
double capacity_ratio_true_of(const ResultRow& r) { return r.capacity_after_true / r.capacity_before; }

json aggregate(const std::vector<ResultRow>& rows)
{
    const auto ok = ok_rows(rows);
    const Stats th = stats(column(ok, [](const ResultRow& r) { return r.theta_err_deg; }));
    const Stats ph = stats(column(ok, [](const ResultRow& r) { return r.phi_err_deg; }));
    const Stats g = stats(column(ok, sir_gain_of));
    const Stats gt = stats(column(ok, sir_gain_true_of));
    const Stats c = stats(column(ok, capacity_ratio_of));
    const Stats ct = stats(column(ok, capacity_ratio_true_of));
    return {{"trials", rows.size()},
            {"failed_trials", rows.size() - ok.size()},
            {"mae_theta_deg", th.mean},
            {"se_theta_deg", th.se},
            {"mae_phi_deg", ph.mean},
            {"se_phi_deg", ph.se},
            {"mean_sir_gain_db", g.mean},
            {"mean_sir_gain_true_db", gt.mean},
            {"mean_capacity_ratio", c.mean},
            {"mean_capacity_ratio_true", ct.mean}};
}

ExperimentResult pose_ensemble(const ExperimentSpec& spec, ExperimentKind kind)
{
    const auto ctx = prepare_poses(spec);
    std::vector<TrialSetup> setups;
    for (int pose = 0; pose < static_cast<int>(ctx.size()); ++pose)
        for (int t = 0; t < spec.trials; ++t) setups.push_back({kind, pose, t, pose, spec.p, spec.q, false});

    ExperimentResult result;
    result.kind = kind;
    result.rows = run_trials(spec, ctx, setups);

    Table poses{"pose_stats.csv",
                {"pose", "rot_y_deg", "rot_x_deg", "theta_true_deg", "phi_true_deg", "theta_mean_deg",
                 "theta_std_deg", "phi_mean_deg", "phi_std_deg", "mae_theta_deg", "mae_phi_deg", "ok_trials"},
                {}};
    Curve theta_curve{"theta_estimate.csv", "theta_true_deg", "theta_mean_deg", {}};
    Curve phi_curve{"phi_estimate.csv", "phi_true_deg", "phi_mean_deg", {}};
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        std::vector<const ResultRow*> mine;
        for (const auto& r : result.rows)
            if (r.pose == static_cast<int>(i) && r.ok()) mine.push_back(&r);
        const Stats th = stats(column(mine, [](const ResultRow& r) { return r.theta_est_deg; }));
        // Signed circular deviation keeps the spread meaningful across the +-180 seam.
        const Stats dev = stats(column(mine, [](const ResultRow& r) {
            return rad2deg(wrap_pi(deg2rad(r.phi_est_deg - r.phi_true_deg)));
        }));
        const Stats eth = stats(column(mine, [](const ResultRow& r) { return r.theta_err_deg; }));
        const Stats eph = stats(column(mine, [](const ResultRow& r) { return r.phi_err_deg; }));
        const double theta_true = rad2deg(ctx[i].truth.theta);
        const double phi_true = rad2deg(ctx[i].truth.phi);
        const double phi_mean = rad2deg(wrap_pi(deg2rad(phi_true + dev.mean)));
        poses.rows.push_back({std::to_string(i), format_number(ctx[i].spec.rot_y_deg),
                              format_number(ctx[i].spec.rot_x_deg), format_number(theta_true),
                              format_number(phi_true), format_number(th.mean), format_number(th.sd),
                              format_number(phi_mean), format_number(dev.sd), format_number(eth.mean),
                              format_number(eph.mean), std::to_string(mine.size())});
        theta_curve.points.emplace_back(theta_true, th.mean);
        phi_curve.points.emplace_back(phi_true, phi_mean);
    }
    result.tables.push_back(std::move(poses));
    result.curves.push_back(std::move(theta_curve));
    result.curves.push_back(std::move(phi_curve));
    result.summary = aggregate(result.rows);
    return result;
}

ExperimentResult sweep(const ExperimentSpec& spec, ExperimentKind kind)
{
    const bool by_p = kind == ExperimentKind::subcarrier_sweep;
    const auto& values = by_p ? spec.p_values : spec.q_values;
    const auto ctx = prepare_poses(spec);
    const int n_pose = static_cast<int>(ctx.size());

    std::vector<TrialSetup> setups;
    for (int point = 0; point < static_cast<int>(values.size()); ++point) {
        for (int t = 0; t < spec.trials; ++t) {
            const int v = values[static_cast<std::size_t>(point)];
            setups.push_back({kind, point, t, t % n_pose, by_p ? v : spec.p, by_p ? spec.q : v, by_p});
        }
    }

    ExperimentResult result;
    result.kind = kind;
    result.rows = run_trials(spec, ctx, setups);

    const std::string x = by_p ? "p" : "q";
    Table table{by_p ? "sweep_p.csv" : "sweep_q.csv",
                {x, "mae_theta_deg", "se_theta_deg", "mae_phi_deg", "se_phi_deg", "mean_sir_gain_db",
                 "se_sir_gain_db", "ok_trials"},
                {}};
    Curve c_theta{"mae_theta_vs_" + x + ".csv", x, "mae_theta_deg", {}};
    Curve c_phi{"mae_phi_vs_" + x + ".csv", x, "mae_phi_deg", {}};
    Curve c_gain{"sir_gain_vs_" + x + ".csv", x, "mean_sir_gain_db", {}};
    json points = json::array();
    for (int point = 0; point < static_cast<int>(values.size()); ++point) {
        std::vector<const ResultRow*> mine;
        for (const auto& r : result.rows)
            if (r.point == point && r.ok()) mine.push_back(&r);
        const Stats th = stats(column(mine, [](const ResultRow& r) { return r.theta_err_deg; }));
        const Stats ph = stats(column(mine, [](const ResultRow& r) { return r.phi_err_deg; }));
        const Stats g = stats(column(mine, sir_gain_of));
        const double v = values[static_cast<std::size_t>(point)];
        table.rows.push_back({std::to_string(values[static_cast<std::size_t>(point)]), format_number(th.mean),
                              format_number(th.se), format_number(ph.mean), format_number(ph.se),
                              format_number(g.mean), format_number(g.se), std::to_string(mine.size())});
        c_theta.points.emplace_back(v, th.mean);
        c_phi.points.emplace_back(v, ph.mean);
        c_gain.points.emplace_back(v, g.mean);
        points.push_back({{x, values[static_cast<std::size_t>(point)]},
                          {"mae_theta_deg", th.mean},
                          {"se_theta_deg", th.se},
                          {"mae_phi_deg", ph.mean},
                          {"se_phi_deg", ph.se},
                          {"mean_sir_gain_db", g.mean},
                          {"se_sir_gain_db", g.se},
                          {"ok_trials", mine.size()}});
    }
    result.tables.push_back(std::move(table));
    result.curves.push_back(std::move(c_theta));
    result.curves.push_back(std::move(c_phi));
    result.curves.push_back(std::move(c_gain));
    result.summary = aggregate(result.rows);
    result.summary["points"] = points;
    return result;
}

double complex_correlation(const std::vector<cdouble>& a, const std::vector<cdouble>& b)
{
    cdouble cross{};
    double pa = 0.0, pb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cross += a[i] * std::conj(b[i]);
        pa += std::norm(a[i]);
        pb += std::norm(b[i]);
    }
    if (pa <= 0.0 || pb <= 0.0) return 0.0;
    return std::abs(cross) / std::sqrt(pa * pb);
}

// Largest per-element phase deviation once the common offset is removed.
double max_phase_deviation(const std::vector<cdouble>& a, const std::vector<cdouble>& b)
{
    cdouble cross{};
    for (std::size_t i = 0; i < a.size(); ++i) cross += a[i] * std::conj(b[i]);
    const double offset = std::arg(cross);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(wrap_pi(std::arg(a[i]) - std::arg(b[i]) - offset)));
    return worst;
}

std::string_view status_name(FarfieldStatus s)
{
    switch (s) {
    case FarfieldStatus::ok: return "ok";
    case FarfieldStatus::warning: return "FARFIELD_VIOLATION(warning)";
    case FarfieldStatus::violation: return "FARFIELD_VIOLATION";
    }
    return "unknown";
}

} // namespace

std::vector<std::string> result_columns()
{
    return {"experiment",    "point",          "trial",           "pose",
            "theta_true_deg", "phi_true_deg",  "theta_est_deg",   "phi_est_deg",
            "theta_err_deg", "phi_err_deg",    "sir_before_db",   "sir_after_db",
            "sir_after_true_db", "capacity_before", "capacity_after", "capacity_after_true",
            "p",             "q",              "u",               "seed",
            "status"};
}

std::vector<std::string> result_cells(const ResultRow& r)
{
    return {std::string(to_string(r.kind)),
            std::to_string(r.point),
            std::to_string(r.trial),
            std::to_string(r.pose),
            format_number(r.theta_true_deg),
            format_number(r.phi_true_deg),
            format_number(r.theta_est_deg),
            format_number(r.phi_est_deg),
            format_number(r.theta_err_deg),
            format_number(r.phi_err_deg),
            format_number(r.sir_before_db),
            format_number(r.sir_after_db),
            format_number(r.sir_after_true_db),
            format_number(r.capacity_before),
            format_number(r.capacity_after),
            format_number(r.capacity_after_true),
            std::to_string(r.p),
            std::to_string(r.q),
            std::to_string(r.u),
            std::to_string(r.seed),
            r.status};
}

std::uint64_t trial_seed(std::uint64_t master, int point, int trial)
{
    const std::uint64_t index =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(point)) << 32) | static_cast<std::uint32_t>(trial);
    return splitmix64(master ^ splitmix64(index));
}

std::string format_number(double value)
{
    if (value == 0.0) return "0"; // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::vector<std::pair<double, double>> ccdf_points(std::vector<double> values)
{
    std::vector<std::pair<double, double>> out;
    if (values.empty()) return out;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    out.emplace_back(values.front(), 1.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
        out.emplace_back(values[i], static_cast<double>(values.size() - i - 1) / n);
    }
    return out;
}

ExperimentResult run_angle_sweep(const ExperimentSpec& spec) { return pose_ensemble(spec, ExperimentKind::angle_sweep); }

ExperimentResult run_ccdf(const ExperimentSpec& spec)
{
    if (spec.poses.size() * static_cast<std::size_t>(spec.trials) < 2)
        throw Error(ErrorCode::config, "a CCDF needs at least two poses or trials");
    ExperimentResult result = pose_ensemble(spec, ExperimentKind::ccdf);
    const auto ok = ok_rows(result.rows);
    result.curves.push_back({"sir_gain_ccdf.csv", "sir_gain_db", "ccdf", ccdf_points(column(ok, sir_gain_of))});
    result.curves.push_back(
        {"sir_gain_true_ccdf.csv", "sir_gain_db", "ccdf", ccdf_points(column(ok, sir_gain_true_of))});
    result.curves.push_back(
        {"capacity_ratio_ccdf.csv", "capacity_ratio", "ccdf", ccdf_points(column(ok, capacity_ratio_of))});
    result.curves.push_back({"capacity_ratio_true_ccdf.csv", "capacity_ratio", "ccdf",
                             ccdf_points(column(ok, capacity_ratio_true_of))});
    return result;
}

ExperimentResult run_subcarrier_sweep(const ExperimentSpec& spec) { return sweep(spec, ExperimentKind::subcarrier_sweep); }

ExperimentResult run_antenna_sweep(const ExperimentSpec& spec)
{
    if (spec.scenario.rx.n_elements < 12) throw Error(ErrorCode::config, "antenna sweep needs at least 12 Rx elements");
    return sweep(spec, ExperimentKind::antenna_sweep);
}

ExperimentResult run_imi_demo(const ExperimentSpec& spec)
{
    const auto& sc = spec.scenario;
    const double k = sc.carrier_wavenumber();
    const RxPose aligned = RxPose::tilted(spec.distance_m, 0.0, 0.0);
    const RxPose tilted = RxPose::tilted(spec.distance_m, deg2rad(spec.imi_tilt_deg), 0.0);
    const MisalignmentAngles truth = misalignment_angles(tilted);
    const PhaseMask mask = phase_mask(truth.theta, truth.phi, k, sc.rx);

    ExperimentResult result;
    result.kind = ExperimentKind::imi_demo;
    result.imi.emplace_back("imi_aligned.csv",
                            imi_matrix(sc, aligned, spec.imi_modes, spec.imi_modes, nullptr, spec.model, k));
    result.imi.emplace_back("imi_misaligned.csv",
                            imi_matrix(sc, tilted, spec.imi_modes, spec.imi_modes, nullptr, spec.model, k));
    result.imi.emplace_back("imi_corrected.csv",
                            imi_matrix(sc, tilted, spec.imi_modes, spec.imi_modes, &mask, spec.model, k));
    const ImiMatrix& a = result.imi[0].second;
    const ImiMatrix& m = result.imi[1].second;
    const ImiMatrix& c = result.imi[2].second;

    Table table{"imi_summary.csv",
                {"mode", "diag_fraction_aligned_db", "diag_fraction_misaligned_db", "diag_fraction_corrected_db",
                 "isolation_aligned_db", "isolation_misaligned_db", "isolation_corrected_db"},
                {}};
    double worst_degradation = 0.0, worst_gap = 0.0, min_isolation = kSirCapDb;
    for (int l : spec.imi_modes) {
        const double fa = diagonal_fraction_db(a, l), fm = diagonal_fraction_db(m, l), fc = diagonal_fraction_db(c, l);
        worst_degradation = std::max(worst_degradation, fa - fm);
        worst_gap = std::max(worst_gap, fa - fc);
        min_isolation = std::min(min_isolation, isolation_db(a, l));
        table.rows.push_back({std::to_string(l), format_number(fa), format_number(fm), format_number(fc),
                              format_number(isolation_db(a, l)), format_number(isolation_db(m, l)),
                              format_number(isolation_db(c, l))});
    }
    result.tables.push_back(std::move(table));
    result.summary = {{"tilt_deg", spec.imi_tilt_deg},
                      {"theta_true_deg", rad2deg(truth.theta)},
                      {"phi_true_deg", rad2deg(truth.phi)},
                      {"max_degradation_misaligned_db", worst_degradation},
                      {"max_gap_corrected_db", worst_gap},
                      {"min_isolation_aligned_db", min_isolation}};
    return result;
}

ExperimentResult validate_model(const ExperimentSpec& spec)
{
    ExperimentResult result;
    result.kind = ExperimentKind::validate_model;
    const double k = spec.scenario.carrier_wavenumber();

    Table report{"validation.csv",
                 {"ring", "n", "radius_m", "distance_m", "pose", "theta_deg", "phi_deg", "mode", "correlation",
                  "max_phase_dev_rad", "farfield"},
                 {}};
    double min_corr = 1.0, min_corr_near = 1.0;
    json warnings = json::array();
    for (std::size_t r = 0; r < spec.validation_rings.size(); ++r) {
        Scenario sc = spec.scenario;
        sc.rx = UcaGeometry::make(spec.validation_rings[r].n, spec.validation_rings[r].radius_m);
        Table phases{"phase_ring" + std::to_string(r) + ".csv",
                     {"element", "azimuth_deg", "pose", "mode", "phase_exact_rad", "phase_farfield_rad"},
                     {}};
        for (double distance : {spec.distance_m, spec.validation_near_distance_m}) {
            const bool main = distance == spec.distance_m;
            const FarfieldStatus ff = farfield_status(distance, sc.tx, sc.rx);
            if (ff != FarfieldStatus::ok)
                warnings.push_back({{"ring", r}, {"distance_m", distance}, {"status", std::string(status_name(ff))}});
            for (std::size_t pi = 0; pi < spec.validation_poses.size(); ++pi) {
                const auto& ps = spec.validation_poses[pi];
                const RxPose pose = RxPose::tilted(distance, deg2rad(ps.rot_y_deg), deg2rad(ps.rot_x_deg));
                const MisalignmentAngles ang = misalignment_angles(pose);
                sc.pose = pose;
                for (int l : spec.validation_modes) {
                    const auto exact = exact_received_signal(sc, pose, l, k);
                    double corr = 0.0, dev = 0.0;
                    std::vector<cdouble> far;
                    if (ff != FarfieldStatus::violation) {
                        far = farfield_received_signal(sc, pose, l, k);
                        corr = complex_correlation(exact, far);
                        dev = max_phase_deviation(exact, far);
                    }
                    if (main) min_corr = std::min(min_corr, corr);
                    else min_corr_near = std::min(min_corr_near, corr);
                    report.rows.push_back({std::to_string(r), std::to_string(sc.rx.n_elements),
                                           format_number(sc.rx.radius), format_number(distance), std::to_string(pi),
                                           format_number(rad2deg(ang.theta)), format_number(rad2deg(ang.phi)),
                                           std::to_string(l), format_number(corr), format_number(dev),
                                           std::string(status_name(ff))});
                    if (main && !far.empty()) {
                        for (int m = 0; m < sc.rx.n_elements; ++m) {
                            phases.rows.push_back({std::to_string(m), format_number(rad2deg(sc.rx.azimuth(m))),
                                                   std::to_string(pi), std::to_string(l),
                                                   format_number(std::arg(exact[static_cast<std::size_t>(m)])),
                                                   format_number(std::arg(far[static_cast<std::size_t>(m)]))});
                        }
                    }
                }
            }
        }
        result.tables.push_back(std::move(phases));
    }
    result.tables.insert(result.tables.begin(), std::move(report));
    result.summary = {{"min_correlation", min_corr},
                      {"min_correlation_near", min_corr_near},
                      {"near_distance_m", spec.validation_near_distance_m},
                      {"farfield_warnings", warnings}};
    return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec)
{
    switch (spec.kind) {
    case ExperimentKind::angle_sweep: return run_angle_sweep(spec);
    case ExperimentKind::ccdf: return run_ccdf(spec);
    case ExperimentKind::subcarrier_sweep: return run_subcarrier_sweep(spec);
    case ExperimentKind::antenna_sweep: return run_antenna_sweep(spec);
    case ExperimentKind::imi_demo: return run_imi_demo(spec);
    case ExperimentKind::validate_model: return validate_model(spec);
    }
    throw Error(ErrorCode::config, "unknown experiment kind");
}

} // namespace vortex
