#include "vortex/correction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vortex/error.hpp"

namespace vortex {

namespace {

std::size_t position_of(const std::vector<int>& list, int value, const char* what)
{
    auto it = std::find(list.begin(), list.end(), value);
    if (it == list.end()) throw Error(ErrorCode::invalid_argument, std::string(what) + " not in mode list");
    return static_cast<std::size_t>(it - list.begin());
}

double to_db(double ratio) { return 10.0 * std::log10(ratio); }

double capped_sir_db(double signal, double interference)
{
    if (signal <= 0.0) throw Error(ErrorCode::zero_signal, "diagonal IMI entry is zero");
    if (interference <= 0.0) return kSirCapDb;
    return std::min(to_db(signal / interference), kSirCapDb);
}

} // namespace

PhaseMask phase_mask(double theta, double phi, double k, const UcaGeometry& rx)
{
    if (!(theta >= 0.0 && theta < kPi / 2.0))
        throw Error(ErrorCode::invalid_argument, "mask elevation must satisfy 0 <= theta < pi/2");
    PhaseMask mask{std::vector<double>(rx.n_elements), theta, phi, k};
    const double s = std::sin(theta);
    for (int m = 0; m < rx.n_elements; ++m) {
        const double x = rx.radius * std::cos(rx.azimuth(m));
        const double y = rx.radius * std::sin(rx.azimuth(m));
        mask.phases[m] = wrap_pi(-k * s * (x * std::cos(phi) + y * std::sin(phi)));
    }
    return mask;
}

int max_decodable_mode(int n_rx) { return n_rx / 2 - 1; }

std::vector<cdouble> decode_modes(std::span<const cdouble> samples, const UcaGeometry& rx, const PhaseMask* mask,
                                  std::span<const int> modes)
{
    if (static_cast<int>(samples.size()) != rx.n_elements)
        throw Error(ErrorCode::invalid_argument, "decode needs one sample per Rx element");
    if (mask && static_cast<int>(mask->phases.size()) != rx.n_elements)
        throw Error(ErrorCode::invalid_argument, "mask size does not match the Rx array");
    const int limit = max_decodable_mode(rx.n_elements);
    for (int l : modes) {
        if (std::abs(l) > limit)
            throw Error(ErrorCode::aliased_mode, "mode " + std::to_string(l) + " exceeds the ring sampling limit");
    }

    std::vector<cdouble> corrected(samples.begin(), samples.end());
    if (mask) {
        for (std::size_t m = 0; m < corrected.size(); ++m) corrected[m] *= std::polar(1.0, mask->phases[m]);
    }
    std::vector<cdouble> out;
    out.reserve(modes.size());
    const double norm = 1.0 / rx.n_elements;
    for (int l : modes) {
        cdouble acc{0.0, 0.0};
        for (int m = 0; m < rx.n_elements; ++m) acc += corrected[m] * std::polar(1.0, l * rx.azimuth(m));
        out.push_back(acc * norm);
    }
    return out;
}

ImiMatrix imi_from_snapshots(std::span<const std::vector<cdouble>> snapshots, std::span<const int> tx_modes,
                             std::span<const int> decoded_modes, const UcaGeometry& rx, const PhaseMask* mask)
{
    if (snapshots.size() != tx_modes.size())
        throw Error(ErrorCode::invalid_argument, "one snapshot per transmitted mode is required");
    ImiMatrix imi;
    imi.decoded_modes.assign(decoded_modes.begin(), decoded_modes.end());
    imi.tx_modes.assign(tx_modes.begin(), tx_modes.end());
    imi.power.assign(imi.rows() * imi.cols(), 0.0);
    imi.received_power.assign(imi.cols(), 0.0);
    for (std::size_t c = 0; c < tx_modes.size(); ++c) {
        const auto decoded = decode_modes(snapshots[c], rx, mask, decoded_modes);
        for (std::size_t r = 0; r < decoded.size(); ++r) imi.at(r, c) = std::norm(decoded[r]);
        double total = 0.0;
        for (const auto& y : snapshots[c]) total += std::norm(y);
        imi.received_power[c] = total / rx.n_elements;
    }
    return imi;
}

ImiMatrix imi_matrix(const Scenario& scenario, const RxPose& pose, std::span<const int> tx_modes,
                     std::span<const int> decoded_modes, const PhaseMask* mask, ChannelModel model, double k)
{
    std::vector<std::vector<cdouble>> snapshots;
    snapshots.reserve(tx_modes.size());
    for (int l : tx_modes) snapshots.push_back(received_signal(scenario, pose, l, k, model));
    return imi_from_snapshots(snapshots, tx_modes, decoded_modes, scenario.rx, mask);
}

SirReport sir(const ImiMatrix& imi)
{
    SirReport report;
    for (std::size_t c = 0; c < imi.cols(); ++c) {
        const int l = imi.tx_modes[c];
        const std::size_t row = position_of(imi.decoded_modes, l, "transmitted mode");
        const double signal = imi.at(row, c);

        double into_slot = 0.0;
        for (std::size_t other = 0; other < imi.cols(); ++other)
            if (other != c) into_slot += imi.at(row, other);
        report.per_mode_db.push_back(capped_sir_db(signal, into_slot));

        double leaked = 0.0;
        for (std::size_t r = 0; r < imi.rows(); ++r)
            if (r != row) leaked += imi.at(r, c);
        report.leakage_db.push_back(capped_sir_db(signal, leaked));
    }
    if (!report.per_mode_db.empty()) {
        report.average_db = std::accumulate(report.per_mode_db.begin(), report.per_mode_db.end(), 0.0) /
                            static_cast<double>(report.per_mode_db.size());
    }
    return report;
}

double sir_gain(const ImiMatrix& before, const ImiMatrix& after)
{
    if (before.tx_modes != after.tx_modes || before.decoded_modes != after.decoded_modes)
        throw Error(ErrorCode::invalid_argument, "SIR gain needs matrices over the same modes");
    return sir(after).average_db - sir(before).average_db;
}

double capacity(const ImiMatrix& imi)
{
    double c = 0.0;
    for (double db : sir(imi).per_mode_db) c += std::log2(1.0 + std::pow(10.0, db / 10.0));
    return c;
}

double diagonal_fraction_db(const ImiMatrix& imi, int tx_mode)
{
    const std::size_t c = position_of(imi.tx_modes, tx_mode, "transmitted mode");
    const std::size_t r = position_of(imi.decoded_modes, tx_mode, "decoded mode");
    const double total = imi.received_power.at(c);
    if (total <= 0.0) throw Error(ErrorCode::zero_signal, "no received power for transmitted mode");
    const double own = imi.at(r, c);
    if (own <= 0.0) return -kSirCapDb;
    return std::max(to_db(own / total), -kSirCapDb);
}

double isolation_db(const ImiMatrix& imi, int tx_mode)
{
    const std::size_t c = position_of(imi.tx_modes, tx_mode, "transmitted mode");
    const std::size_t r = position_of(imi.decoded_modes, tx_mode, "decoded mode");
    double leaked = 0.0;
    for (std::size_t row = 0; row < imi.rows(); ++row)
        if (row != r) leaked += imi.at(row, c);
    return capped_sir_db(imi.at(r, c), leaked);
}

std::string to_csv(const ImiMatrix& imi)
{
    std::ostringstream os;
    os.precision(12);
    os << "decoded\\tx";
    for (int l : imi.tx_modes) os << ',' << l;
    os << '\n';
    for (std::size_t r = 0; r < imi.rows(); ++r) {
        os << imi.decoded_modes[r];
        for (std::size_t c = 0; c < imi.cols(); ++c) os << ',' << imi.at(r, c);
        os << '\n';
    }
    return os.str();
}

} // namespace vortex
