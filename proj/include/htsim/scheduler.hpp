#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "htsim/framing.hpp"
#include "htsim/geometry.hpp"
#include "htsim/rng.hpp"

namespace htsim {

// Per-user bit accounting. Arrivals and drains are whole bits so conservation
// (served <= offered, cumulatively) holds exactly.
struct TrafficQueues {
    std::vector<long long> backlog_bits;
    std::vector<long long> offered_bits;
    std::vector<long long> served_bits;

    explicit TrafficQueues(int n_users)
        : backlog_bits(n_users, 0), offered_bits(n_users, 0), served_bits(n_users, 0) {}

    void add(int user, long long bits) {
        backlog_bits[user] += bits;
        offered_bits[user] += bits;
    }
    long long drain(int user, long long bits) {
        const long long taken = std::min(bits, backlog_bits[user]);
        backlog_bits[user] -= taken;
        served_bits[user] += taken;
        return taken;
    }
};

// Two-state on/off source per user with geometric holding times. Active users
// arrive at beam_load/(users_in_beam * duty_cycle) bits per second so the
// long-run offered rate per beam equals beam_load.
class TrafficGenerator {
  public:
    TrafficGenerator(const UserPopulation& pop, double beam_load_bps, double duty_cycle,
                     double mean_active_epochs, double epoch_s, std::uint64_t seed);

    // arrivals for one epoch, added to the queues
    void step(TrafficQueues& queues);

    double active_rate_bps() const { return active_rate_bps_; }
    double mean_rate_bps() const { return mean_rate_bps_; }

  private:
    struct UserState {
        Rng rng;
        bool active;
    };
    std::vector<UserState> states_;
    long long active_bits_per_epoch_ = 0;
    double active_rate_bps_ = 0.0;
    double mean_rate_bps_ = 0.0;
    double p_leave_active_ = 0.0;
    double p_leave_idle_ = 0.0;
    bool always_active_ = false;
};

// Fair policy: the user with the largest unserved backlog, lowest id on ties.
// Returns nothing when every candidate backlog is zero (the beam idles).
std::optional<int> select_first_user(const TrafficQueues& queues, const std::vector<int>& users);

// Random policy: uniform over the users with positive backlog.
std::optional<int> random_policy_first_user(const TrafficQueues& queues,
                                            const std::vector<int>& users, Rng& rng);

struct FrameGroup {
    int beam = -1;
    std::vector<int> users;  // seed user first
};

// Fills the frame with the candidates whose magnitude-normalized CSI rows are
// closest to the seed user's (Euclidean distance), ties broken by lowest id.
// norm_mag_rows[u] must hold user u's unit-norm |CSI| row.
FrameGroup select_group(int seed_user, const std::vector<int>& candidates,
                        const std::vector<Eigen::VectorXd>& norm_mag_rows, int beam,
                        int group_size);

struct ServeResult {
    long long capacity_bits = 0;
    long long served_bits = 0;
    double utilization = 0.0;
    bool outage = false;
};

// Frame capacity is bundle_payload_symbols * efficiency(min group SINR);
// queues drain in group order, seed user first. An SINR below every table
// threshold is an outage and serves nothing.
ServeResult serve_frame(const FrameGroup& group, double min_sinr_db, const ModcodTable& table,
                        long bundle_payload_symbols, TrafficQueues& queues);

}  // namespace htsim
