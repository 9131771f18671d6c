#pragma once

#include <span>
#include <string>
#include <vector>

#include "vortex/channel.hpp"

namespace vortex {

// Per-element receiver phases that cancel the tilt-induced linear phase front.
struct PhaseMask {
    std::vector<double> phases; // rad, indexed by Rx element
    double theta = 0.0;
    double phi = 0.0;
    double k = 0.0;
};

// P_m = -k sin(theta) (x_m cos(phi) + y_m sin(phi)) at the element's local (x, y).
PhaseMask phase_mask(double theta, double phi, double k, const UcaGeometry& rx);

// Highest |l| a ring of n_rx elements decodes without aliasing: floor(n_rx/2) - 1.
int max_decodable_mode(int n_rx);

// Mode-matched decoding of one Rx snapshot (one sample per element).
//
// A receiver facing the transmitter sees the azimuth of the transmit ring
// mirrored, so transmitted mode l arrives with phase progression -l*phi_m.
// The decoder for mode l therefore correlates with exp(+i l phi_m):
//   D_l = (1/N_r) sum_m y_m exp(i P_m) exp(i l phi_m).
std::vector<cdouble> decode_modes(std::span<const cdouble> samples, const UcaGeometry& rx, const PhaseMask* mask,
                                  std::span<const int> modes);

// Power leakage between transmitted and decoded modes.
struct ImiMatrix {
    std::vector<int> decoded_modes; // rows
    std::vector<int> tx_modes;      // columns
    std::vector<double> power;      // row-major [decoded][tx]
    // Power per transmitted mode summed over all N_r decode slots, which by
    // Parseval equals (1/N_r) * sum_m |y_m|^2.
    std::vector<double> received_power;

    double at(std::size_t row, std::size_t col) const { return power.at(row * tx_modes.size() + col); }
    double& at(std::size_t row, std::size_t col) { return power.at(row * tx_modes.size() + col); }
    std::size_t rows() const { return decoded_modes.size(); }
    std::size_t cols() const { return tx_modes.size(); }
};

// Builds the matrix from received snapshots, one per transmitted mode.
ImiMatrix imi_from_snapshots(std::span<const std::vector<cdouble>> snapshots, std::span<const int> tx_modes,
                             std::span<const int> decoded_modes, const UcaGeometry& rx, const PhaseMask* mask);

ImiMatrix imi_matrix(const Scenario& scenario, const RxPose& pose, std::span<const int> tx_modes,
                     std::span<const int> decoded_modes, const PhaseMask* mask, ChannelModel model, double k);

inline constexpr double kSirCapDb = 200.0;

struct SirReport {
    std::vector<double> per_mode_db; // decode-slot SIR, one per transmitted mode
    double average_db = 0.0;
    // Diagnostic: leakage of each transmitted mode into other decode slots.
    std::vector<double> leakage_db;
};

// SIR_l = P[l][l] / sum_{l'' != l} P[l][l''] in dB, capped at kSirCapDb.
SirReport sir(const ImiMatrix& imi);
double sir_gain(const ImiMatrix& before, const ImiMatrix& after);
// Interference-limited Shannon sum: sum_l log2(1 + SIR_l).
double capacity(const ImiMatrix& imi);

// Share of a transmitted mode's received power captured by its own decode
// slot, in dB (<= 0). 0 dB means perfect orthogonality.
double diagonal_fraction_db(const ImiMatrix& imi, int tx_mode);
// Own-slot power over the power leaked into the other listed decode slots, in dB.
double isolation_db(const ImiMatrix& imi, int tx_mode);

// Rows = decoded modes, columns = transmitted modes, header row/column of mode integers.
std::string to_csv(const ImiMatrix& imi);

} // namespace vortex
