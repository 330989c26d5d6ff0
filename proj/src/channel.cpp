#include "htsim/channel.hpp"

#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>

#include "htsim/rng.hpp"

namespace htsim {

namespace {
constexpr double kBoltzmannDb = -228.59916717321767;  // 10*log10(k)
constexpr double kSpeedOfLight = 299792458.0;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

void LinkParams::validate() const {
    if (frequency_ghz <= 0.0 || bandwidth_hz <= 0.0 || sat_power_w <= 0.0)
        throw std::invalid_argument("link params: frequency, bandwidth and power must be > 0");
    if (rolloff < 0.0 || rolloff >= 1.0)
        throw std::invalid_argument("link params: rolloff must be in [0, 1)");
    if (slant_range_km <= 0.0 && path_loss_db <= 0.0)
        throw std::invalid_argument("link params: need slant_range_km or path_loss_db");
}

double LinkParams::effective_path_loss_db() const {
    if (path_loss_db > 0.0) return path_loss_db;
    const double f_hz = frequency_ghz * 1e9;
    const double d_m = slant_range_km * 1e3;
    return 20.0 * std::log10(4.0 * M_PI * d_m * f_hz / kSpeedOfLight);
}

double antenna_gain_db(const BeamGrid& grid, int beam, double x_km, double y_km,
                       const AntennaPattern& pattern) {
    const Beam& b = grid.beams.at(beam);
    const double d = std::hypot(x_km - b.x_km, y_km - b.y_km);
    const double rel = d / grid.radius_3db_km;
    const double rolloff_db = 3.0 * rel * rel;
    return pattern.peak_gain_dbi - std::min(rolloff_db, pattern.floor_below_peak_db);
}

double carrier_to_noise_db(const LinkParams& params, double gain_db) {
    const double eirp_dbw = 10.0 * std::log10(params.tx_power_w()) + gain_db;
    return eirp_dbw - params.effective_path_loss_db() - params.atmos_loss_db +
           params.terminal_gt_dbk - kBoltzmannDb - 10.0 * std::log10(params.bandwidth_hz);
}

ChannelMatrix build_channel_matrix(const BeamGrid& grid, const UserPopulation& pop,
                                   const LinkParams& params, const AntennaPattern& pattern,
                                   std::uint64_t seed, int layer) {
    params.validate();

    const int n_users = pop.size();
    const int n_beams = grid.size();
    ChannelMatrix out;
    out.layer = layer;
    out.h = Eigen::MatrixXcd::Zero(n_users, n_beams);

    // one LO phase per beam chain (per polarization layer), fixed for the run
    std::vector<double> lo_phase(n_beams);
    for (int b = 0; b < n_beams; ++b) {
        Rng rng(derive_seed(seed, stream::kLoPhase, static_cast<std::uint64_t>(layer),
                            static_cast<std::uint64_t>(b)));
        lo_phase[b] = rng.uniform(0.0, kTwoPi);
    }

    const double wavelength_m = kSpeedOfLight / (params.frequency_ghz * 1e9);
    const double tx_power = params.tx_power_w();
    // All beams radiate from one platform, so the dominant path phase is
    // common to a user's whole row and carries no SINR information. What
    // remains per beam is the chain LO phase plus the small geometric term
    // from the feed displacement: path difference ~ feed_offset * off-axis
    // angle, smooth in the user position.
    const double feed_phase_rad_per_km =
        kTwoPi * params.feed_offset_m / (wavelength_m * params.slant_range_km);

    for (int k = 0; k < n_users; ++k) {
        const User& user = pop.users[k];
        const int user_colour = grid.colour_of[user.beam];
        for (int b = 0; b < n_beams; ++b) {
            if (grid.colour_of[b] != user_colour) continue;  // structural colour mask
            const double gain = antenna_gain_db(grid, b, user.x_km, user.y_km, pattern);
            const double cn_lin =
                std::pow(10.0, carrier_to_noise_db(params, gain) / 10.0);
            const double amplitude = std::sqrt(cn_lin / tx_power);
            const double d_km =
                std::hypot(user.x_km - grid.beams[b].x_km, user.y_km - grid.beams[b].y_km);
            out.h(k, b) = std::polar(amplitude, lo_phase[b] + feed_phase_rad_per_km * d_km);
        }
    }
    return out;
}

void write_channel_csv(const ChannelMatrix& channel, std::ostream& os) {
    os << "user,beam,re,im\n";
    for (Eigen::Index k = 0; k < channel.h.rows(); ++k)
        for (Eigen::Index b = 0; b < channel.h.cols(); ++b) {
            const std::complex<double> v = channel.h(k, b);
            if (v == std::complex<double>(0.0, 0.0)) continue;
            os << k << ',' << b << ',' << v.real() << ',' << v.imag() << '\n';
        }
}

}  // namespace htsim
