#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vortex/geometry.hpp"

namespace vortex {

// Integer-order Bessel function of the first kind. Negative orders and
// arguments follow J_{-l}(x) = (-1)^l J_l(x) and J_l(-x) = (-1)^l J_l(x).
double bessel_j(int order, double x);

// Antenna-dependent phase delta_m = atan(tan(phi - phi_m) / cos(theta)),
// evaluated with atan2 so the quadrant follows (sin, cos theta * cos).
double delta(double theta, double phi, double phi_m);

// rho_m = sqrt(cos^2(theta) cos^2(phi - phi_m) + sin^2(phi - phi_m)), in [cos theta, 1].
double rho(double theta, double phi, double phi_m);

// s_m for every receive element: point-source summation over all transmit
// elements with exact 3-D distances. Valid in the near field.
std::vector<cdouble> exact_received_signal(const Scenario& scenario, const RxPose& pose, int mode, double k);

enum class FarfieldStatus { ok, warning, violation };

// ok when r >= 100 * max(a_t, a_r), warning between 10x and 100x, violation below.
FarfieldStatus farfield_status(double distance, const UcaGeometry& tx, const UcaGeometry& rx);

// Closed-form far-field sample for receive element m (Bessel model).
cdouble farfield_received_signal(int m, int mode, double k, double theta, double phi, double gamma, double distance,
                                 const UcaGeometry& tx, const UcaGeometry& rx, cdouble alpha);

// Same model for all receive elements, with the angles derived from the pose.
std::vector<cdouble> farfield_received_signal(const Scenario& scenario, const RxPose& pose, int mode, double k);

enum class ChannelModel { exact, farfield };

// Complex samples y[m][l][k] over dense antenna / mode / subcarrier index sets.
// Indices passed to at() are positions in the respective lists.
class SampleTensor {
public:
    SampleTensor() = default;
    SampleTensor(std::vector<int> antennas, std::vector<int> modes, std::vector<double> subcarriers_hz);

    const std::vector<int>& antennas() const { return antennas_; }
    const std::vector<int>& modes() const { return modes_; }
    const std::vector<double>& subcarriers_hz() const { return subcarriers_hz_; }

    std::size_t n_antennas() const { return antennas_.size(); }
    std::size_t n_modes() const { return modes_.size(); }
    std::size_t n_subcarriers() const { return subcarriers_hz_.size(); }
    std::size_t size() const { return values_.size(); }

    cdouble& at(std::size_t antenna_pos, std::size_t mode_pos, std::size_t subcarrier_pos);
    cdouble at(std::size_t antenna_pos, std::size_t mode_pos, std::size_t subcarrier_pos) const;

    std::optional<std::size_t> antenna_position(int antenna) const;
    std::optional<std::size_t> mode_position(int mode) const;

    std::span<cdouble> values() { return values_; }
    std::span<const cdouble> values() const { return values_; }

    double mean_power() const;
    // Keeps only the listed subcarrier positions, in the given order.
    SampleTensor select_subcarriers(std::span<const int> positions) const;
    void scale(cdouble factor);

private:
    std::size_t flat(std::size_t a, std::size_t l, std::size_t k) const;

    std::vector<int> antennas_;
    std::vector<int> modes_;
    std::vector<double> subcarriers_hz_;
    std::vector<cdouble> values_;
};

// Additive circularly-symmetric complex Gaussian noise. Exactly one of
// variance / snr_db is set; snr_db is relative to the tensor's mean power.
struct NoiseSpec {
    std::optional<double> variance;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;

    static NoiseSpec none() { return NoiseSpec{0.0, std::nullopt, 0}; }
    static NoiseSpec with_variance(double variance, std::uint64_t seed) { return {variance, std::nullopt, seed}; }
    static NoiseSpec with_snr_db(double snr_db, std::uint64_t seed) { return {std::nullopt, snr_db, seed}; }

    double resolve_variance(double signal_power) const;
};

// Adds noise in place; draws are independent per sample and reproducible from the seed.
void add_noise(SampleTensor& tensor, const NoiseSpec& noise);

// Simulates every receive element for the given modes and subcarrier positions
// (indices into scenario.subcarriers_hz), then adds noise.
SampleTensor simulate_measurement(const Scenario& scenario, const RxPose& pose, std::span<const int> modes,
                                  std::span<const int> subcarriers, const NoiseSpec& noise, ChannelModel model);

// Received vector over all Rx elements for one mode and wavenumber.
std::vector<cdouble> received_signal(const Scenario& scenario, const RxPose& pose, int mode, double k,
                                     ChannelModel model);

} // namespace vortex
