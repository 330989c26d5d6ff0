#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>

#include "htsim/geometry.hpp"

namespace htsim {

// Downlink budget inputs for one beam carrier. Values not taken from the
// scenario table are documented assumptions (peak gain, slant range) and
// remain configurable.
struct LinkParams {
    double frequency_ghz = 20.0;
    double bandwidth_hz = 250e6;
    double rolloff = 0.20;
    double sat_power_w = 100.0;  // saturated RF power per beam/polarization
    double obo_db = 2.0;
    double terminal_gt_dbk = 16.9;
    double slant_range_km = 38000.0;
    double path_loss_db = 0.0;  // 0 -> free-space loss at slant_range_km
    double atmos_loss_db = 0.0; // fixed clear-sky margin, constant over a run
    double feed_offset_m = 1.0; // effective feed displacement driving the
                                // position-dependent part of the beam phase

    double symbol_rate_hz() const { return bandwidth_hz / (1.0 + rolloff); }
    double tx_power_w() const { return sat_power_w * std::pow(10.0, -obo_db / 10.0); }
    double effective_path_loss_db() const;
    void validate() const;
};

// Parametric main lobe: peak - 3*(d/r3dB)^2 dB, floored floor_below_peak_db
// under the peak. The overlap factor and the floor are the two calibration
// knobs for the co-channel interference ladder seen by edge users.
struct AntennaPattern {
    double peak_gain_dbi = 42.0;
    double floor_below_peak_db = 23.0;
};

double antenna_gain_db(const BeamGrid& grid, int beam, double x_km, double y_km,
                       const AntennaPattern& pattern);

// C/N in dB for a user seeing the given total antenna gain.
double carrier_to_noise_db(const LinkParams& params, double gain_db);

// Complex user x beam channel for one polarization layer. Entries are scaled
// so |h_kb|^2 * tx_power_w equals the linear carrier-to-noise ratio with the
// per-user noise power normalized to 1. Off-colour entries are exactly zero.
struct ChannelMatrix {
    Eigen::MatrixXcd h;  // users x beams
    double noise_power = 1.0;
    int layer = 0;
};

ChannelMatrix build_channel_matrix(const BeamGrid& grid, const UserPopulation& pop,
                                   const LinkParams& params, const AntennaPattern& pattern,
                                   std::uint64_t seed, int layer = 0);

// Debug dump: user,beam,re,im rows for the non-zero entries.
void write_channel_csv(const ChannelMatrix& channel, std::ostream& os);

}  // namespace htsim
