#include "htsim/precoding.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace htsim {

Eigen::RowVectorXcd average_group_channels(const std::vector<Eigen::RowVectorXcd>& csi_rows,
                                           int serving_col) {
    if (csi_rows.empty())
        throw std::invalid_argument("average_group_channels: empty group");
    const Eigen::Index n = csi_rows.front().size();
    if (serving_col < 0 || serving_col >= n)
        throw std::invalid_argument("average_group_channels: serving column out of range");

    Eigen::RowVectorXcd mean = Eigen::RowVectorXcd::Zero(n);
    for (const Eigen::RowVectorXcd& row : csi_rows) {
        if (row.size() != n)
            throw std::invalid_argument("average_group_channels: row length mismatch");
        const std::complex<double> ref = row(serving_col);
        const double mag = std::abs(ref);
        // rotate the serving coefficient onto the positive real axis; a zero
        // serving coefficient has no phase to remove
        const std::complex<double> rot = mag > 0.0 ? std::conj(ref) / mag : 1.0;
        mean += rot * row;
    }
    mean /= static_cast<double>(csi_rows.size());
    return mean;
}

Eigen::MatrixXcd mmse_precoder(const Eigen::MatrixXcd& group_rows, double noise_power,
                               double total_power) {
    if (noise_power < 0.0)
        throw std::invalid_argument("mmse_precoder: noise_power must be >= 0");
    if (total_power <= 0.0)
        throw std::invalid_argument("mmse_precoder: total_power must be > 0");
    const Eigen::Index groups = group_rows.rows();
    const Eigen::Index beams = group_rows.cols();
    if (groups == 0) return Eigen::MatrixXcd::Zero(beams, 0);
    if (groups > beams)
        throw std::invalid_argument("mmse_precoder: more groups than beams");

    const double alpha = static_cast<double>(beams) * noise_power / total_power;
    Eigen::MatrixXcd gram = group_rows * group_rows.adjoint();
    gram.diagonal().array() += alpha;

    if (alpha > 0.0) {
        // Hermitian positive definite by construction
        const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
        if (llt.info() == Eigen::Success)
            return group_rows.adjoint() * llt.solve(Eigen::MatrixXcd::Identity(groups, groups));
    }
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
    if (!lu.isInvertible())
        throw std::runtime_error(
            "mmse_precoder: singular group channel (rank-deficient rows with zero loading)");
    return group_rows.adjoint() * lu.inverse();
}

double normalize_power(Eigen::MatrixXcd& w, double per_beam_limit_w) {
    if (per_beam_limit_w <= 0.0)
        throw std::invalid_argument("normalize_power: limit must be > 0");
    if (w.size() == 0) return 1.0;
    double max_row_power = 0.0;
    for (Eigen::Index b = 0; b < w.rows(); ++b)
        max_row_power = std::max(max_row_power, w.row(b).squaredNorm());
    if (max_row_power <= 0.0)
        throw std::invalid_argument("normalize_power: all-zero precoding matrix");
    const double scale = std::sqrt(per_beam_limit_w / max_row_power);
    w *= scale;
    return scale;
}

double sinr_from_products(const Eigen::RowVectorXcd& y, int serving_group, double noise_power,
                          double external_interference_power) {
    double desired = 0.0;
    double intra = 0.0;
    for (Eigen::Index j = 0; j < y.size(); ++j) {
        const double p = std::norm(y(j));
        if (j == serving_group)
            desired = p;
        else
            intra += p;
    }
    const double denom = intra + external_interference_power + noise_power;
    return 10.0 * std::log10(desired / denom);
}

double sinr_db(const Eigen::RowVectorXcd& true_channel_row, const Eigen::MatrixXcd& w,
               int serving_group, double noise_power, double external_interference_power) {
    if (true_channel_row.size() != w.rows())
        throw std::invalid_argument("sinr_db: channel row / precoder dimension mismatch");
    if (serving_group < 0 || serving_group >= w.cols())
        throw std::invalid_argument("sinr_db: serving group out of range");
    const Eigen::RowVectorXcd y = true_channel_row * w;
    return sinr_from_products(y, serving_group, noise_power, external_interference_power);
}

double benchmark_sinr_db(const Eigen::RowVectorXcd& true_channel_row, int serving_beam,
                         const Eigen::VectorXd& beam_powers_w, double noise_power) {
    if (true_channel_row.size() != beam_powers_w.size())
        throw std::invalid_argument("benchmark_sinr_db: row / powers dimension mismatch");
    double desired = 0.0;
    double interference = 0.0;
    for (Eigen::Index b = 0; b < true_channel_row.size(); ++b) {
        const double p = std::norm(true_channel_row(b)) * beam_powers_w(b);
        if (b == serving_beam)
            desired = p;
        else
            interference += p;  // off-colour entries are zero and drop out
    }
    return 10.0 * std::log10(desired / (interference + noise_power));
}

}  // namespace htsim
