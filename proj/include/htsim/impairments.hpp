#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "htsim/rng.hpp"

namespace htsim {

struct GaussStats {
    double mean = 0.0;
    double stddev = 0.0;
};

// Channel-estimation impairment profile as seen by the gateway: coefficients
// below the estimation threshold are invisible, surviving ones carry
// multiplicative amplitude and additive phase errors (different statistics
// for the serving signal and for interferers), and the per-beam payload-chain
// phase drifts between the estimate and its use.
//
// Units: threshold in dB relative to the serving coefficient; amplitude
// errors are linear relative factors; main/interference phase errors are in
// radians; the outdated-phase spread is in degrees.
struct ImpairmentStats {
    double threshold_db = -std::numeric_limits<double>::infinity();
    double outdated_phase_std_deg = 0.0;
    GaussStats main_amp;
    GaussStats main_phase;
    GaussStats intf_amp;
    GaussStats intf_phase;

    static ImpairmentStats ideal() { return {}; }
    static ImpairmentStats real();
    void validate() const;
};

// Zeroes coefficients whose power is more than |threshold_db| below the
// serving coefficient's power; the boundary case is kept. -inf keeps all.
Eigen::RowVectorXcd apply_estimation_threshold(const Eigen::RowVectorXcd& row, int serving,
                                               double threshold_db);

// h -> h * (1 + eps_amp) * exp(i*eps_phase) on the surviving coefficients;
// serving coefficient uses the main-signal statistics, the rest the
// interference statistics. Zero entries stay exactly zero.
void apply_estimation_errors(Eigen::RowVectorXcd& row, int serving, const ImpairmentStats& stats,
                             Rng& rng);

// One Gaussian phase draw per beam chain per refresh, applied to that beam's
// column across all users. The terminal-common LNB phase is not modelled: it
// cancels in every SINR.
void apply_outdated_phase(Eigen::MatrixXcd& csi, double std_deg, Rng& rng);

// Full GW-side CSI for one refresh: threshold, estimation errors (per-user
// substream), then the per-beam outdated phase. serving[k] is user k's beam.
Eigen::MatrixXcd impair_csi(const Eigen::MatrixXcd& truth, const std::vector<int>& serving,
                            const ImpairmentStats& stats, std::uint64_t seed,
                            std::uint64_t refresh_index);

}  // namespace htsim
