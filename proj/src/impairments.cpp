#include "htsim/impairments.hpp"

#include <cmath>
#include <stdexcept>

namespace htsim {

namespace {
constexpr double kDegToRad = 0.017453292519943295;
}

ImpairmentStats ImpairmentStats::real() {
    ImpairmentStats s;
    s.threshold_db = -21.0;
    s.outdated_phase_std_deg = 4.14;
    s.main_amp = {0.0093, 0.0143};
    s.main_phase = {-0.0115, 0.0115};  // radians
    s.intf_amp = {0.0064, 0.0191};
    s.intf_phase = {0.0102, 0.0282};  // radians
    return s;
}

void ImpairmentStats::validate() const {
    if (outdated_phase_std_deg < 0.0 || main_amp.stddev < 0.0 || main_phase.stddev < 0.0 ||
        intf_amp.stddev < 0.0 || intf_phase.stddev < 0.0)
        throw std::invalid_argument("impairment stats: standard deviations must be >= 0");
    if (std::isnan(threshold_db))
        throw std::invalid_argument("impairment stats: threshold must be a number or -inf");
}

Eigen::RowVectorXcd apply_estimation_threshold(const Eigen::RowVectorXcd& row, int serving,
                                               double threshold_db) {
    if (std::isinf(threshold_db) && threshold_db < 0.0) return row;
    const double serving_power = std::norm(row(serving));
    if (serving_power <= 0.0)
        throw std::invalid_argument("estimation threshold: serving coefficient is zero");
    const double floor = serving_power * std::pow(10.0, threshold_db / 10.0);
    Eigen::RowVectorXcd out = row;
    for (Eigen::Index b = 0; b < out.size(); ++b)
        if (std::norm(out(b)) < floor) out(b) = 0.0;
    return out;
}

void apply_estimation_errors(Eigen::RowVectorXcd& row, int serving, const ImpairmentStats& stats,
                             Rng& rng) {
    for (Eigen::Index b = 0; b < row.size(); ++b) {
        if (row(b) == std::complex<double>(0.0, 0.0)) continue;
        const GaussStats& amp = (b == serving) ? stats.main_amp : stats.intf_amp;
        const GaussStats& phase = (b == serving) ? stats.main_phase : stats.intf_phase;
        const double eps_a = rng.normal(amp.mean, amp.stddev);
        const double eps_p = rng.normal(phase.mean, phase.stddev);
        row(b) *= (1.0 + eps_a) * std::polar(1.0, eps_p);
    }
}

void apply_outdated_phase(Eigen::MatrixXcd& csi, double std_deg, Rng& rng) {
    if (std_deg < 0.0) throw std::invalid_argument("outdated phase: std must be >= 0");
    if (std_deg == 0.0) return;
    for (Eigen::Index b = 0; b < csi.cols(); ++b) {
        const double drift = rng.normal(0.0, std_deg * kDegToRad);
        csi.col(b) *= std::polar(1.0, drift);
    }
}

Eigen::MatrixXcd impair_csi(const Eigen::MatrixXcd& truth, const std::vector<int>& serving,
                            const ImpairmentStats& stats, std::uint64_t seed,
                            std::uint64_t refresh_index) {
    stats.validate();
    Eigen::MatrixXcd csi(truth.rows(), truth.cols());
    for (Eigen::Index k = 0; k < truth.rows(); ++k) {
        Eigen::RowVectorXcd row =
            apply_estimation_threshold(truth.row(k), serving[k], stats.threshold_db);
        Rng rng(derive_seed(seed, stream::kCsiError, refresh_index,
                            static_cast<std::uint64_t>(k)));
        apply_estimation_errors(row, serving[k], stats, rng);
        csi.row(k) = row;
    }
    if (stats.outdated_phase_std_deg > 0.0) {
        // one drift draw per beam chain: substream keyed by refresh only,
        // consumed column by column so all users of a beam rotate together
        Rng rng(derive_seed(seed, stream::kCsiDrift, refresh_index));
        apply_outdated_phase(csi, stats.outdated_phase_std_deg, rng);
    }
    return csi;
}

}  // namespace htsim
