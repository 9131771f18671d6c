#include "vortex/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "vortex/correction.hpp"
#include "vortex/error.hpp"
#include "vortex/nelder_mead.hpp"

namespace vortex {

namespace {

constexpr double kZeroAccumulator = 1e-300;
constexpr double kAmplitudeFloor = 1e-150;
constexpr double kWeightFloor = 1e-12;
constexpr double kDiametricTol = 1e-9;
constexpr double kThetaCeiling = kPi / 2.0 - 1e-9;

struct Pair {
    int mode_i;
    int mode_j;
};

// All pairs with l_i > l_j, in a fixed order.
std::vector<Pair> mode_pairs(std::vector<int> modes)
{
    std::sort(modes.begin(), modes.end(), std::greater<>());
    std::vector<Pair> out;
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (std::size_t j = i + 1; j < modes.size(); ++j) out.push_back({modes[i], modes[j]});
    return out;
}

std::vector<double> grid_axis(double start, double stop_exclusive, double step)
{
    std::vector<double> out;
    for (double v = start; v < stop_exclusive - 1e-12; v += step) out.push_back(v);
    return out;
}

// Coherent power after masking, summed over the estimation modes and subcarriers.
double corrected_power(const SampleTensor& tensor, const Scenario& scenario, const EstimationConfig& config,
                       double theta, double phi)
{
    const UcaGeometry& rx = scenario.rx;
    const auto& antennas = tensor.antennas();
    double total = 0.0;
    for (int kp : config.subcarriers) {
        const double k = wavenumber(tensor.subcarriers_hz().at(static_cast<std::size_t>(kp)));
        const PhaseMask mask = phase_mask(theta, phi, k, rx);
        for (int l : config.modes) {
            const std::size_t lp = *tensor.mode_position(l);
            cdouble acc{0.0, 0.0};
            for (std::size_t a = 0; a < antennas.size(); ++a) {
                const int m = antennas[a];
                acc += tensor.at(a, lp, static_cast<std::size_t>(kp)) *
                       std::polar(1.0, mask.phases[m] + l * rx.azimuth(m));
            }
            total += std::norm(acc / static_cast<double>(antennas.size()));
        }
    }
    return total;
}

} // namespace

bool has_diametric_pair(std::span<const int> antennas, int n_rx)
{
    for (std::size_t i = 0; i < antennas.size(); ++i) {
        for (std::size_t j = i + 1; j < antennas.size(); ++j) {
            const double gap = circular_distance(2.0 * kPi * antennas[i] / n_rx, 2.0 * kPi * antennas[j] / n_rx);
            if (std::abs(gap - kPi) < kDiametricTol) return true;
        }
    }
    return false;
}

int max_pair_free_antennas(int n_rx) { return n_rx % 2 == 0 ? n_rx / 2 : n_rx; }

void EstimationConfig::validate(int n_rx) const
{
    if (modes.size() < 2) throw Error(ErrorCode::degenerate_geometry, "at least two modes are required");
    std::set<int> unique_modes(modes.begin(), modes.end());
    if (unique_modes.size() != modes.size()) throw Error(ErrorCode::degenerate_geometry, "modes must be distinct");
    if (antennas.size() < 3) throw Error(ErrorCode::degenerate_geometry, "at least three antennas are required");
    std::set<int> unique_antennas(antennas.begin(), antennas.end());
    if (unique_antennas.size() != antennas.size())
        throw Error(ErrorCode::degenerate_geometry, "antennas must be distinct");
    for (int m : antennas) {
        if (m < 0 || m >= n_rx) throw Error(ErrorCode::degenerate_geometry, "antenna index outside the Rx array");
    }
    if (static_cast<int>(antennas.size()) <= max_pair_free_antennas(n_rx) && has_diametric_pair(antennas, n_rx))
        throw Error(ErrorCode::degenerate_geometry, "selected antennas include a diametrically opposed pair");
    if (subcarriers.empty()) throw Error(ErrorCode::degenerate_geometry, "at least one subcarrier is required");
    if (!(grid_theta_deg > 0.0 && grid_phi_deg > 0.0 && grid_gamma_deg > 0.0))
        throw Error(ErrorCode::invalid_argument, "grid steps must be positive");
    if (!(tolerance > 0.0) || max_iterations < 1)
        throw Error(ErrorCode::invalid_argument, "refinement tolerance and iteration cap must be positive");
}

double cross_modal_phase(const SampleTensor& tensor, int antenna, int mode_i, int mode_j,
                         std::span<const int> subcarriers)
{
    const auto a = tensor.antenna_position(antenna);
    const auto li = tensor.mode_position(mode_i);
    const auto lj = tensor.mode_position(mode_j);
    if (!a || !li || !lj) throw Error(ErrorCode::missing_samples, "antenna or mode absent from the tensor");
    cdouble acc{0.0, 0.0};
    for (int k : subcarriers) {
        if (k < 0 || static_cast<std::size_t>(k) >= tensor.n_subcarriers())
            throw Error(ErrorCode::missing_samples, "subcarrier absent from the tensor");
        const cdouble z = tensor.at(*a, *li, static_cast<std::size_t>(k)) *
                          std::conj(tensor.at(*a, *lj, static_cast<std::size_t>(k)));
        acc += z * z;
    }
    if (std::abs(acc) < kZeroAccumulator) throw Error(ErrorCode::zero_power, "cross-modal accumulator vanished");
    return 0.5 * std::arg(acc);
}

CrossModalPhaseSet measure_cross_modal_phases(const SampleTensor& tensor, const EstimationConfig& config,
                                              const UcaGeometry& rx)
{
    CrossModalPhaseSet set;
    for (int m : config.antennas) {
        const auto a = tensor.antenna_position(m);
        if (!a) throw Error(ErrorCode::missing_samples, "antenna " + std::to_string(m) + " absent from the tensor");
        double amp = 0.0;
        for (int l : config.modes) {
            const auto lp = tensor.mode_position(l);
            if (!lp) throw Error(ErrorCode::missing_samples, "mode " + std::to_string(l) + " absent from the tensor");
            for (int k : config.subcarriers) {
                if (k < 0 || static_cast<std::size_t>(k) >= tensor.n_subcarriers())
                    throw Error(ErrorCode::missing_samples, "subcarrier absent from the tensor");
                amp += std::abs(tensor.at(*a, *lp, static_cast<std::size_t>(k)));
            }
        }
        set.antennas.push_back(m);
        set.antenna_azimuths.push_back(rx.azimuth(m));
        set.amplitudes.push_back(amp / static_cast<double>(config.modes.size() * config.subcarriers.size()));
    }
    if (std::all_of(set.amplitudes.begin(), set.amplitudes.end(), [](double a) { return a < kAmplitudeFloor; }))
        throw Error(ErrorCode::no_power, "all selected antennas are below the amplitude floor");

    const auto pairs = mode_pairs(config.modes);
    for (int m : set.antennas) {
        for (const auto& p : pairs) {
            set.entries.push_back({m, p.mode_i, p.mode_j,
                                   cross_modal_phase(tensor, m, p.mode_i, p.mode_j, config.subcarriers)});
        }
    }
    return set;
}

std::vector<int> select_antennas(int n_rx, int q)
{
    if (n_rx < 3) throw Error(ErrorCode::infeasible, "antenna selection needs at least three Rx elements");
    if (q < 3 || q > n_rx) throw Error(ErrorCode::invalid_argument, "need 3 <= Q <= N_r");

    std::vector<int> base(q);
    for (int j = 0; j < q; ++j) base[j] = static_cast<int>((static_cast<long long>(j) * n_rx + q - 1) / q);
    if (q > max_pair_free_antennas(n_rx)) return base;

    std::vector<int> chosen;
    std::vector<bool> blocked(n_rx, false);
    for (int idx : base) {
        int candidate = idx;
        for (int tries = 0; tries < n_rx && blocked[candidate]; ++tries) candidate = (candidate + 1) % n_rx;
        if (blocked[candidate]) throw Error(ErrorCode::infeasible, "no pair-free antenna set exists");
        chosen.push_back(candidate);
        blocked[candidate] = true;
        if (n_rx % 2 == 0) blocked[(candidate + n_rx / 2) % n_rx] = true;
    }
    return chosen;
}

std::pair<int, int> select_modes(const Scenario& scenario)
{
    const double x = scenario.carrier_wavenumber() * scenario.rx.radius * scenario.tx.radius / scenario.pose.distance;
    const int limit = std::max(1, max_decodable_mode(scenario.rx.n_elements));
    int best = 1;
    double best_gain = -1.0;
    for (int l = 1; l <= limit; ++l) {
        const double g = std::abs(bessel_j(l, x));
        if (g > best_gain) {
            best_gain = g;
            best = l;
        }
    }
    return {-best, best};
}

std::vector<double> weights(std::span<const double> amplitudes, Weighting scheme)
{
    std::vector<double> out(amplitudes.size(), 1.0);
    if (scheme == Weighting::uniform || amplitudes.empty()) return out;
    const int power = scheme == Weighting::amplitude ? 1 : 2;
    double mean = 0.0;
    for (double a : amplitudes) {
        if (!(a >= 0.0)) throw Error(ErrorCode::invalid_argument, "amplitudes must be nonnegative");
        mean += std::pow(a, power);
    }
    mean /= static_cast<double>(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        out[i] = mean > 0.0 ? std::max(std::pow(amplitudes[i], power) / mean, kWeightFloor) : 1.0;
    return out;
}

double loss(double theta, double phi, double gamma, const CrossModalPhaseSet& phases, std::span<const double> weights)
{
    const std::size_t per = phases.pairs_per_antenna();
    if (weights.size() != phases.antennas.size())
        throw Error(ErrorCode::invalid_argument, "one weight per antenna is required");
    double total = 0.0;
    for (std::size_t a = 0; a < phases.antennas.size(); ++a) {
        const double dm = delta(theta, phi, phases.antenna_azimuths[a]);
        for (std::size_t p = 0; p < per; ++p) {
            const auto& e = phases.entries[a * per + p];
            const double model = 2.0 * (e.mode_i - e.mode_j) * (dm + gamma);
            total += weights[a] * std::norm(std::polar(1.0, 2.0 * e.phase) - std::polar(1.0, model));
        }
    }
    return total;
}

MisalignmentEstimate estimate(const SampleTensor& tensor, const Scenario& scenario, const EstimationConfig& config)
{
    config.validate(scenario.rx.n_elements);
    const auto phases = measure_cross_modal_phases(tensor, config, scenario.rx);
    const auto lambda = weights(phases.amplitudes, config.weighting);

    // Coarse grid. For fixed (theta, phi) the loss is a sum of sinusoids in
    // gamma, so per-pair sums are formed once and reused across the gamma axis.
    const std::size_t per = phases.pairs_per_antenna();
    const std::size_t q = phases.antennas.size();
    std::vector<double> dl(per);
    for (std::size_t p = 0; p < per; ++p) dl[p] = phases.entries[p].mode_i - phases.entries[p].mode_j;
    std::vector<cdouble> measured(phases.entries.size());
    for (std::size_t i = 0; i < measured.size(); ++i) measured[i] = std::polar(1.0, -2.0 * phases.entries[i].phase);
    const double lambda_sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);

    const auto theta_axis = grid_axis(0.0, kPi / 2.0, deg2rad(config.grid_theta_deg));
    const auto phi_axis = grid_axis(-kPi + deg2rad(config.grid_phi_deg), kPi + 1e-9, deg2rad(config.grid_phi_deg));
    const auto gamma_axis =
        grid_axis(-kPi + deg2rad(config.grid_gamma_deg), kPi + 1e-9, deg2rad(config.grid_gamma_deg));
    std::vector<cdouble> gamma_rot(per * gamma_axis.size());
    for (std::size_t p = 0; p < per; ++p)
        for (std::size_t g = 0; g < gamma_axis.size(); ++g)
            gamma_rot[p * gamma_axis.size() + g] = std::polar(1.0, 2.0 * dl[p] * gamma_axis[g]);

    double best_loss = std::numeric_limits<double>::infinity();
    double best_theta = 0.0, best_phi = 0.0, best_gamma = 0.0;
    std::vector<cdouble> pair_sum(per);
    for (double th : theta_axis) {
        for (double ph : phi_axis) {
            std::fill(pair_sum.begin(), pair_sum.end(), cdouble{});
            for (std::size_t a = 0; a < q; ++a) {
                const double dm = delta(th, ph, phases.antenna_azimuths[a]);
                for (std::size_t p = 0; p < per; ++p)
                    pair_sum[p] += lambda[a] * measured[a * per + p] * std::polar(1.0, 2.0 * dl[p] * dm);
            }
            for (std::size_t g = 0; g < gamma_axis.size(); ++g) {
                double value = 0.0;
                for (std::size_t p = 0; p < per; ++p)
                    value += 2.0 * lambda_sum - 2.0 * std::real(pair_sum[p] * gamma_rot[p * gamma_axis.size() + g]);
                if (value < best_loss) {
                    best_loss = value;
                    best_theta = th;
                    best_phi = ph;
                    best_gamma = gamma_axis[g];
                }
            }
        }
    }

    MisalignmentEstimate est;
    est.grid_theta = best_theta;
    est.grid_phi = best_phi;
    est.grid_gamma = best_gamma;
    est.grid_loss = best_loss;

    // Local refinement. loss depends on theta only through cos(theta), so
    // negative trial values fold back onto |theta|; the front-facing ceiling
    // is enforced with a quadratic penalty.
    auto objective = [&](std::span<const double> x) {
        double th = std::abs(x[0]);
        double penalty = 0.0;
        if (th > kThetaCeiling) {
            penalty = 1e3 * (th - kThetaCeiling) * (th - kThetaCeiling);
            th = kThetaCeiling;
        }
        return loss(th, x[1], x[2], phases, lambda) + penalty;
    };
    const std::vector<double> step = {deg2rad(config.grid_theta_deg), deg2rad(config.grid_phi_deg),
                                      deg2rad(config.grid_gamma_deg)};
    NelderMeadOptions opts{config.tolerance, config.max_iterations};
    auto refined = nelder_mead(objective, {best_theta, best_phi, best_gamma}, step, opts);
    est.refinement_iterations = refined.iterations;

    est.theta = std::min(std::abs(refined.x[0]), kThetaCeiling);
    est.phi = wrap_pi(refined.x[1]);
    est.gamma = wrap_pi(refined.x[2]);
    est.residual = std::max(0.0, loss(est.theta, est.phi, est.gamma, phases, lambda));

    // phi and phi + pi give identical cross-modal phases; keep the candidate
    // whose correction mask concentrates more power into the matched modes.
    const double phi_alt = wrap_pi(est.phi + kPi);
    const double p_keep = corrected_power(tensor, scenario, config, est.theta, est.phi);
    const double p_alt = corrected_power(tensor, scenario, config, est.theta, phi_alt);
    est.ambiguity_resolved = true;
    if (p_alt > p_keep) {
        est.phi = phi_alt;
        est.phi_flipped = true;
        est.kept_power = p_alt;
        est.rejected_power = p_keep;
    } else {
        est.kept_power = p_keep;
        est.rejected_power = p_alt;
    }
    return est;
}

} // namespace vortex
