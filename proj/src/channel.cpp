#include "vortex/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vortex/error.hpp"

namespace vortex {

namespace {

constexpr double kOverlapDistance = 1e-9;
constexpr double kFarfieldHard = 10.0;
constexpr double kFarfieldWarn = 100.0;

void require_front_facing(double theta)
{
    if (!(theta >= 0.0 && theta < kPi / 2.0))
        throw Error(ErrorCode::invalid_argument, "elevation must satisfy 0 <= theta < pi/2");
}

} // namespace

double delta(double theta, double phi, double phi_m)
{
    const double d = phi - phi_m;
    return std::atan2(std::sin(d), std::cos(theta) * std::cos(d));
}

double rho(double theta, double phi, double phi_m)
{
    const double d = phi - phi_m;
    const double c = std::cos(theta) * std::cos(d);
    const double s = std::sin(d);
    return std::sqrt(c * c + s * s);
}

std::vector<cdouble> exact_received_signal(const Scenario& scenario, const RxPose& pose, int mode, double k)
{
    if (!(k > 0.0)) throw Error(ErrorCode::invalid_argument, "wavenumber must be positive");
    const auto tx_pos = element_positions_tx(scenario.tx);
    const auto rx_pos = element_positions_rx(scenario.rx, pose);

    std::vector<cdouble> tx_weight(tx_pos.size());
    for (int n = 0; n < scenario.tx.n_elements; ++n)
        tx_weight[n] = std::polar(1.0, mode * scenario.tx.azimuth(n));

    std::vector<cdouble> out(rx_pos.size());
    for (std::size_t m = 0; m < rx_pos.size(); ++m) {
        cdouble acc{0.0, 0.0};
        for (std::size_t n = 0; n < tx_pos.size(); ++n) {
            const double d = (rx_pos[m] - tx_pos[n]).norm();
            if (d < kOverlapDistance)
                throw Error(ErrorCode::geometry_overlap, "Tx and Rx elements coincide");
            acc += tx_weight[n] * std::polar(1.0 / d, -k * d);
        }
        out[m] = scenario.alpha / k * acc;
    }
    return out;
}

FarfieldStatus farfield_status(double distance, const UcaGeometry& tx, const UcaGeometry& rx)
{
    const double aperture = std::max(tx.radius, rx.radius);
    if (!(distance > kFarfieldHard * aperture)) return FarfieldStatus::violation;
    if (distance < kFarfieldWarn * aperture) return FarfieldStatus::warning;
    return FarfieldStatus::ok;
}

cdouble farfield_received_signal(int m, int mode, double k, double theta, double phi, double gamma, double distance,
                                 const UcaGeometry& tx, const UcaGeometry& rx, cdouble alpha)
{
    if (farfield_status(distance, tx, rx) == FarfieldStatus::violation)
        throw Error(ErrorCode::farfield_violation, "distance must exceed 10x the larger array radius");
    require_front_facing(theta);
    if (!(k > 0.0)) throw Error(ErrorCode::invalid_argument, "wavenumber must be positive");

    const double phi_m = rx.azimuth(m);
    const double d = phi - phi_m;
    const cdouble common = std::polar(1.0 / distance, -k * distance + k * rx.radius * std::sin(theta) * std::cos(d));
    const double bessel = bessel_j(mode, k * rx.radius * tx.radius * rho(theta, phi, phi_m) / distance);
    const cdouble helical = std::polar(1.0, mode * (delta(theta, phi, phi_m) + gamma));
    return alpha / k * common * static_cast<double>(tx.n_elements) * helical * bessel;
}

std::vector<cdouble> farfield_received_signal(const Scenario& scenario, const RxPose& pose, int mode, double k)
{
    const auto angles = misalignment_angles(pose);
    const double g = gamma(pose).gamma;
    std::vector<cdouble> out(scenario.rx.n_elements);
    for (int m = 0; m < scenario.rx.n_elements; ++m) {
        out[m] = farfield_received_signal(m, mode, k, angles.theta, angles.phi, g, pose.distance, scenario.tx,
                                          scenario.rx, scenario.alpha);
    }
    return out;
}

std::vector<cdouble> received_signal(const Scenario& scenario, const RxPose& pose, int mode, double k,
                                     ChannelModel model)
{
    return model == ChannelModel::exact ? exact_received_signal(scenario, pose, mode, k)
                                        : farfield_received_signal(scenario, pose, mode, k);
}

SampleTensor::SampleTensor(std::vector<int> antennas, std::vector<int> modes, std::vector<double> subcarriers_hz)
    : antennas_(std::move(antennas)), modes_(std::move(modes)), subcarriers_hz_(std::move(subcarriers_hz))
{
    auto sorted = modes_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error(ErrorCode::invalid_argument, "mode list entries must be distinct");
    values_.assign(antennas_.size() * modes_.size() * subcarriers_hz_.size(), cdouble{});
}

std::size_t SampleTensor::flat(std::size_t a, std::size_t l, std::size_t k) const
{
    return (a * modes_.size() + l) * subcarriers_hz_.size() + k;
}

cdouble& SampleTensor::at(std::size_t a, std::size_t l, std::size_t k) { return values_.at(flat(a, l, k)); }

cdouble SampleTensor::at(std::size_t a, std::size_t l, std::size_t k) const { return values_.at(flat(a, l, k)); }

std::optional<std::size_t> SampleTensor::antenna_position(int antenna) const
{
    auto it = std::find(antennas_.begin(), antennas_.end(), antenna);
    if (it == antennas_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - antennas_.begin());
}

std::optional<std::size_t> SampleTensor::mode_position(int mode) const
{
    auto it = std::find(modes_.begin(), modes_.end(), mode);
    if (it == modes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - modes_.begin());
}

double SampleTensor::mean_power() const
{
    if (values_.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& v : values_) acc += std::norm(v);
    return acc / static_cast<double>(values_.size());
}

SampleTensor SampleTensor::select_subcarriers(std::span<const int> positions) const
{
    std::vector<double> freqs;
    freqs.reserve(positions.size());
    for (int p : positions) freqs.push_back(subcarriers_hz_.at(static_cast<std::size_t>(p)));
    SampleTensor out(antennas_, modes_, std::move(freqs));
    for (std::size_t a = 0; a < antennas_.size(); ++a)
        for (std::size_t l = 0; l < modes_.size(); ++l)
            for (std::size_t k = 0; k < positions.size(); ++k)
                out.at(a, l, k) = at(a, l, static_cast<std::size_t>(positions[k]));
    return out;
}

void SampleTensor::scale(cdouble factor)
{
    for (auto& v : values_) v *= factor;
}

double NoiseSpec::resolve_variance(double signal_power) const
{
    if (variance) {
        if (!(*variance >= 0.0)) throw Error(ErrorCode::invalid_argument, "noise variance must be >= 0");
        return *variance;
    }
    if (snr_db) return signal_power / std::pow(10.0, *snr_db / 10.0);
    return 0.0;
}

void add_noise(SampleTensor& tensor, const NoiseSpec& noise)
{
    const double var = noise.resolve_variance(tensor.mean_power());
    if (var == 0.0) return;
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(var / 2.0));
    for (auto& v : tensor.values()) {
        const double re = normal(rng);
        const double im = normal(rng);
        v += cdouble(re, im);
    }
}

SampleTensor simulate_measurement(const Scenario& scenario, const RxPose& pose, std::span<const int> modes,
                                  std::span<const int> subcarriers, const NoiseSpec& noise, ChannelModel model)
{
    std::vector<int> antennas(scenario.rx.n_elements);
    for (int m = 0; m < scenario.rx.n_elements; ++m) antennas[m] = m;
    std::vector<double> freqs;
    for (int p : subcarriers) freqs.push_back(scenario.subcarriers_hz.at(static_cast<std::size_t>(p)));

    SampleTensor tensor(antennas, std::vector<int>(modes.begin(), modes.end()), freqs);
    for (std::size_t l = 0; l < modes.size(); ++l) {
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            const auto s = received_signal(scenario, pose, modes[l], wavenumber(freqs[k]), model);
            for (std::size_t a = 0; a < antennas.size(); ++a) tensor.at(a, l, k) = s[a];
        }
    }
    for (const auto& v : tensor.values()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorCode::invalid_argument, "channel produced a non-finite sample");
    }
    add_noise(tensor, noise);
    return tensor;
}

} // namespace vortex
