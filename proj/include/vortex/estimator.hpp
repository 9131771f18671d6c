#pragma once

#include <span>
#include <utility>
#include <vector>

#include "vortex/channel.hpp"

namespace vortex {

enum class Weighting { uniform, amplitude, amplitude_squared };

struct EstimationConfig {
    std::vector<int> modes;       // L_U, distinct, size >= 2
    std::vector<int> antennas;    // M_Q, Rx element indices, size >= 3
    std::vector<int> subcarriers; // K_P, positions in the tensor's subcarrier list
    Weighting weighting = Weighting::amplitude;
    double grid_theta_deg = 3.0;
    double grid_phi_deg = 3.0;
    double grid_gamma_deg = 3.0;
    double tolerance = 1e-10;
    int max_iterations = 200;

    // Throws DEGENERATE_GEOMETRY when the subsets cannot determine the angles.
    void validate(int n_rx) const;
};

struct CrossModalPhase {
    int antenna = 0;
    int mode_i = 0; // l_i > l_j
    int mode_j = 0;
    double phase = 0.0;
};

struct CrossModalPhaseSet {
    std::vector<int> antennas;
    std::vector<double> antenna_azimuths;
    std::vector<double> amplitudes; // mean |y| per antenna over modes and subcarriers
    std::vector<CrossModalPhase> entries; // antenna-major, pairs in fixed order

    std::size_t pairs_per_antenna() const { return antennas.empty() ? 0 : entries.size() / antennas.size(); }
};

struct MisalignmentEstimate {
    double theta = 0.0;
    double phi = 0.0;
    double gamma = 0.0;
    double residual = 0.0;
    bool ambiguity_resolved = false;
    bool phi_flipped = false; // the phi + pi candidate won
    double kept_power = 0.0;
    double rejected_power = 0.0;
    // Grid stage diagnostics.
    double grid_theta = 0.0;
    double grid_phi = 0.0;
    double grid_gamma = 0.0;
    double grid_loss = 0.0;
    int refinement_iterations = 0;
};

// u = 1/2 * angle( sum_k (y_{m,l_i,k} conj(y_{m,l_j,k}))^2 ), in (-pi/2, pi/2].
// The squaring removes the sign of the Bessel factor, so u is (l_i - l_j)(delta_m + gamma) modulo pi.
double cross_modal_phase(const SampleTensor& tensor, int antenna, int mode_i, int mode_j,
                         std::span<const int> subcarriers);

CrossModalPhaseSet measure_cross_modal_phases(const SampleTensor& tensor, const EstimationConfig& config,
                                              const UcaGeometry& rx);

// Evenly spread antenna indices ceil(j * n_rx / q), nudged forward to avoid
// diametrically opposed pairs whenever a pair-free set of size q exists.
std::vector<int> select_antennas(int n_rx, int q);

// True when some pair of the listed elements sits exactly pi apart on the ring.
bool has_diametric_pair(std::span<const int> antennas, int n_rx);

// Largest subset of an n_rx ring with no diametric pair.
int max_pair_free_antennas(int n_rx);

// Symmetric mode pair {-l, +l} maximizing |J_l(k a_r a_t / r)| for 1 <= l <= floor(N_r/2) - 1.
std::pair<int, int> select_modes(const Scenario& scenario);

// Positive weights lambda_m from per-antenna amplitudes (floored at 1e-12).
std::vector<double> weights(std::span<const double> amplitudes, Weighting scheme);

// Sum over antennas and mode pairs of lambda_m |e^{2iu} - e^{2i(l_i-l_j)(delta_m + gamma)}|^2.
// Phases are compared on the doubled circle because u is only defined modulo pi.
double loss(double theta, double phi, double gamma, const CrossModalPhaseSet& phases, std::span<const double> weights);

// Full pipeline: cross-modal phases, coarse grid, simplex refinement, and
// phi / phi + pi disambiguation by corrected received power.
MisalignmentEstimate estimate(const SampleTensor& tensor, const Scenario& scenario, const EstimationConfig& config);

} // namespace vortex
