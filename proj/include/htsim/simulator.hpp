#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "htsim/channel.hpp"
#include "htsim/framing.hpp"
#include "htsim/geometry.hpp"
#include "htsim/impairments.hpp"

namespace htsim {

// benchmark4: four-colour reference system, no precoding, one carrier and one
//             polarization per beam.
// precoding1: full frequency reuse, two polarization layers per beam, one
//             jointly precoded frame group per beam and layer.
enum class Mode { Benchmark4, Precoding1 };
enum class Profile { Ideal, Real, Custom };
enum class Policy { Fair, Random };

struct ScenarioConfig {
    Mode mode = Mode::Benchmark4;
    int num_colours = 4;

    int n_beams = 63;
    double radius_3db_km = 117.6;
    double overlap_factor = 0.95;
    AntennaPattern antenna{};
    int gw_count = 1;
    int users_per_beam = 1000;

    Profile profile = Profile::Ideal;
    ImpairmentStats custom_stats{};
    Policy policy = Policy::Fair;

    LinkParams link{};
    int group_size = 5;
    long bundle_payload_symbols = 64800;
    int codeword_bits = 64800;

    int epochs = 1000;
    int csi_refresh_epochs = 50;
    double duty_cycle = 0.5;
    double mean_active_epochs = 8.0;

    std::vector<double> loads_gbps{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
    std::uint64_t seed = 1;
    ModcodTable modcod = default_modcod_table();
    std::string modcod_table_source = "default";  // "default" or the CSV path

    int layer_count() const { return mode == Mode::Precoding1 ? 2 : 1; }
    ImpairmentStats impairments() const;
    double epoch_s() const { return bundle_payload_symbols / link.symbol_rate_hz(); }
    void validate() const;
};

// One sweep point. Rates are per run duration (epochs * epoch_s); the upper
// bound assumes every transmitted frame fully utilized.
struct LoadPoint {
    double load_gbps = 0.0;
    double offered_gbps = 0.0;
    double served_gbps = 0.0;
    double upper_bound_gbps = 0.0;
    double mean_utilization = 0.0;
    double outage_fraction = 0.0;
    std::vector<double> per_beam_served_gbps;
    std::vector<double> per_user_served_gbps;
    std::vector<long long> per_user_offered_bits;
    std::vector<long long> per_user_served_bits;
    std::vector<int> failed_epochs;  // epochs skipped after a numeric failure
};

struct CapacityReport {
    std::vector<LoadPoint> points;
};

// Immutable physical-layer inputs shared by every load point of a scenario.
struct Preprocessed {
    BeamGrid grid;
    UserPopulation population;
    GwAssignment gws;
    std::vector<ChannelMatrix> layers;                    // true channel per layer
    std::vector<int> layer_of_user;                       // user id -> layer
    std::vector<std::vector<std::vector<int>>> beam_users;  // [layer][beam] -> user ids
    std::vector<double> bench_sinr_db;                    // benchmark mode only
    double epoch_s = 0.0;
    double tx_power_w = 0.0;
};

Preprocessed preprocess(const ScenarioConfig& config);

LoadPoint run_load(const ScenarioConfig& config, const Preprocessed& pre, double load_gbps,
                   int load_index, std::ostream* trace = nullptr);

// Runs every configured load against a shared pre-processor pass.
CapacityReport run_scenario(const ScenarioConfig& config, std::ostream* trace = nullptr);

// run_scenario with the load grid overridden.
CapacityReport sweep_loads(const ScenarioConfig& config, const std::vector<double>& loads);

struct GainPoint {
    double load_gbps = 0.0;
    double served_gain = 0.0;  // served_precoding / served_benchmark - 1
    double ub_gain = 0.0;
    bool unbounded = false;    // benchmark zero with precoding positive
};

std::vector<GainPoint> compute_gain(const CapacityReport& precoding,
                                    const CapacityReport& benchmark);

}  // namespace htsim
