#pragma once

#include <Eigen/Dense>
#include <vector>

namespace htsim {

// Frame-group channel: each scheduled frame shares one precoding vector, so
// the member users' CSI rows are collapsed into a single averaged row before
// the precoder is computed.
//
// Rows are first rotated so the serving-beam coefficient is real and
// non-negative. That removes the terminal-common phase, which carries no
// SINR information, and keeps the mean from cancelling across users whose
// receive chains sit at arbitrary absolute phases.
Eigen::RowVectorXcd average_group_channels(const std::vector<Eigen::RowVectorXcd>& csi_rows,
                                           int serving_col);

// Regularized channel inversion across the co-channel beams of one gateway:
//   W = H^H (H H^H + alpha I)^-1,  alpha = n_beams * noise_power / total_power
// group_rows is groups x beams; the result is beams x groups, one column per
// frame group, not yet power-scaled. noise_power = 0 gives the zero-forcing
// limit and throws if the Gram matrix is singular.
Eigen::MatrixXcd mmse_precoder(const Eigen::MatrixXcd& group_rows, double noise_power,
                               double total_power);

// Scales W by a single scalar so the most loaded beam meets per_beam_limit_w
// exactly (unit-power symbols assumed per column). Preserves the beamforming
// directions; returns the scale factor.
double normalize_power(Eigen::MatrixXcd& w, double per_beam_limit_w);

// SINR of a user served by column `serving_group` of w:
//   |h w_s|^2 / (sum_{j != s} |h w_j|^2 + external + noise)
// external_interference_power carries out-of-cluster and cross-layer terms.
double sinr_db(const Eigen::RowVectorXcd& true_channel_row, const Eigen::MatrixXcd& w,
               int serving_group, double noise_power, double external_interference_power);

// Same ratio computed from the already-multiplied per-group amplitudes
// y = h * W; sinr_db delegates here and the simulator reuses it on batched
// products.
double sinr_from_products(const Eigen::RowVectorXcd& y, int serving_group, double noise_power,
                          double external_interference_power);

// Four-colour reference system: no precoding, each beam transmits its own
// signal at beam_powers_w; interference comes from the other same-colour
// beams (the row is colour-masked, off-colour entries are zero).
double benchmark_sinr_db(const Eigen::RowVectorXcd& true_channel_row, int serving_beam,
                         const Eigen::VectorXd& beam_powers_w, double noise_power);

}  // namespace htsim
