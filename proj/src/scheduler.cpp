#include "htsim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace htsim {

TrafficGenerator::TrafficGenerator(const UserPopulation& pop, double beam_load_bps,
                                   double duty_cycle, double mean_active_epochs, double epoch_s,
                                   std::uint64_t seed) {
    if (beam_load_bps < 0.0) throw std::invalid_argument("traffic: load must be >= 0");
    if (duty_cycle <= 0.0 || duty_cycle > 1.0)
        throw std::invalid_argument("traffic: duty cycle must be in (0, 1]");
    if (mean_active_epochs < 1.0)
        throw std::invalid_argument("traffic: mean active duration must be >= 1 epoch");

    const double users_per_beam = pop.per_beam_count;
    mean_rate_bps_ = beam_load_bps / users_per_beam;
    active_rate_bps_ = mean_rate_bps_ / duty_cycle;
    active_bits_per_epoch_ = std::llround(active_rate_bps_ * epoch_s);

    always_active_ = duty_cycle >= 1.0;
    p_leave_active_ = 1.0 / mean_active_epochs;
    if (!always_active_) {
        const double mean_idle_epochs = mean_active_epochs * (1.0 - duty_cycle) / duty_cycle;
        p_leave_idle_ = 1.0 / std::max(mean_idle_epochs, 1e-12);
    }

    states_.reserve(pop.size());
    for (const User& u : pop.users) {
        Rng rng(derive_seed(seed, stream::kTraffic, static_cast<std::uint64_t>(u.id)));
        // stationary start so the offered mean is unbiased from epoch 0
        const bool active = always_active_ || rng.uniform() < duty_cycle;
        states_.push_back({rng, active});
    }
}

void TrafficGenerator::step(TrafficQueues& queues) {
    if (active_bits_per_epoch_ <= 0) return;
    for (std::size_t u = 0; u < states_.size(); ++u) {
        UserState& s = states_[u];
        if (s.active) queues.add(static_cast<int>(u), active_bits_per_epoch_);
        if (!always_active_) {
            const double x = s.rng.uniform();
            if (s.active ? (x < p_leave_active_) : (x < p_leave_idle_)) s.active = !s.active;
        }
    }
}

std::optional<int> select_first_user(const TrafficQueues& queues, const std::vector<int>& users) {
    int best = -1;
    long long best_backlog = 0;
    for (int u : users) {
        const long long b = queues.backlog_bits[u];
        if (b > best_backlog) {  // strict > keeps the lowest id on ties
            best_backlog = b;
            best = u;
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

std::optional<int> random_policy_first_user(const TrafficQueues& queues,
                                            const std::vector<int>& users, Rng& rng) {
    std::vector<int> eligible;
    eligible.reserve(users.size());
    for (int u : users)
        if (queues.backlog_bits[u] > 0) eligible.push_back(u);
    if (eligible.empty()) return std::nullopt;
    return eligible[rng.below(eligible.size())];
}

FrameGroup select_group(int seed_user, const std::vector<int>& candidates,
                        const std::vector<Eigen::VectorXd>& norm_mag_rows, int beam,
                        int group_size) {
    if (group_size < 1) throw std::invalid_argument("select_group: group size must be >= 1");
    FrameGroup group;
    group.beam = beam;
    group.users.push_back(seed_user);

    const Eigen::VectorXd& ref = norm_mag_rows[seed_user];
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(candidates.size());
    for (int c : candidates) {
        if (c == seed_user) continue;
        ranked.emplace_back((norm_mag_rows[c] - ref).norm(), c);
    }
    std::sort(ranked.begin(), ranked.end());
    const int extra = std::min<int>(group_size - 1, static_cast<int>(ranked.size()));
    for (int i = 0; i < extra; ++i) group.users.push_back(ranked[i].second);
    return group;
}

ServeResult serve_frame(const FrameGroup& group, double min_sinr_db, const ModcodTable& table,
                        long bundle_payload_symbols, TrafficQueues& queues) {
    ServeResult result;
    const double efficiency = modcod_lookup(table, min_sinr_db);
    if (efficiency <= 0.0) {
        result.outage = true;
        return result;
    }
    result.capacity_bits = std::llround(bundle_payload_symbols * efficiency);
    long long remaining = result.capacity_bits;
    for (int u : group.users) {
        if (remaining <= 0) break;
        remaining -= queues.drain(u, remaining);
    }
    result.served_bits = result.capacity_bits - remaining;
    result.utilization =
        static_cast<double>(result.served_bits) / static_cast<double>(result.capacity_bits);
    return result;
}

}  // namespace htsim
