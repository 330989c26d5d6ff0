#include "htsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "htsim/precoding.hpp"
#include "htsim/scheduler.hpp"

namespace htsim {

ImpairmentStats ScenarioConfig::impairments() const {
    switch (profile) {
        case Profile::Ideal: return ImpairmentStats::ideal();
        case Profile::Real: return ImpairmentStats::real();
        case Profile::Custom: return custom_stats;
    }
    return ImpairmentStats::ideal();
}

void ScenarioConfig::validate() const {
    if (mode == Mode::Benchmark4 && num_colours != 4)
        throw std::invalid_argument("config: benchmark4 requires colours = 4");
    if (mode == Mode::Precoding1 && num_colours != 1)
        throw std::invalid_argument("config: precoding1 requires colours = 1");
    if (n_beams < 1) throw std::invalid_argument("config: n_beams must be >= 1");
    if (users_per_beam < 1) throw std::invalid_argument("config: users_per_beam must be >= 1");
    if (gw_count < 1 || n_beams % gw_count != 0)
        throw std::invalid_argument("config: gw_count must divide n_beams");
    if (group_size < 1) throw std::invalid_argument("config: group_size must be >= 1");
    if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
    if (csi_refresh_epochs < 1)
        throw std::invalid_argument("config: csi_refresh_epochs must be >= 1");
    if (loads_gbps.empty()) throw std::invalid_argument("config: loads list is empty");
    for (double l : loads_gbps)
        if (l < 0.0 || !std::isfinite(l))
            throw std::invalid_argument("config: loads must be finite and >= 0");
    bundle_composition(2, codeword_bits, bundle_payload_symbols);  // layout must be exact
    link.validate();
    impairments().validate();
    modcod.validate();
}

Preprocessed preprocess(const ScenarioConfig& config) {
    Preprocessed pre;
    pre.grid = build_beam_grid(config.n_beams, config.radius_3db_km, config.num_colours,
                               config.overlap_factor);
    pre.population = place_users(pre.grid, config.users_per_beam, config.seed);
    pre.gws = cluster_beams(pre.grid, config.gw_count);
    pre.epoch_s = config.epoch_s();
    pre.tx_power_w = config.link.tx_power_w();

    const int layers = config.layer_count();
    pre.layer_of_user.assign(pre.population.size(), 0);
    if (layers == 2)
        for (const User& u : pre.population.users) pre.layer_of_user[u.id] = u.id % 2;

    pre.beam_users.assign(layers, std::vector<std::vector<int>>(config.n_beams));
    for (const User& u : pre.population.users)
        pre.beam_users[pre.layer_of_user[u.id]][u.beam].push_back(u.id);

    for (int l = 0; l < layers; ++l)
        pre.layers.push_back(build_channel_matrix(pre.grid, pre.population, config.link,
                                                  config.antenna, config.seed, l));

    if (config.mode == Mode::Benchmark4) {
        // no precoding: the per-user SINR is fixed by geometry for the whole
        // run, with every beam transmitting at the full per-carrier power
        const Eigen::VectorXd powers =
            Eigen::VectorXd::Constant(config.n_beams, pre.tx_power_w);
        pre.bench_sinr_db.resize(pre.population.size());
        const ChannelMatrix& ch = pre.layers[0];
        for (const User& u : pre.population.users)
            pre.bench_sinr_db[u.id] =
                benchmark_sinr_db(ch.h.row(u.id), u.beam, powers, ch.noise_power);
    }
    return pre;
}

namespace {

struct ScheduledGroup {
    FrameGroup frame;
    int cluster = 0;
    int index_in_cluster = 0;  // column of the cluster's precoder
};

// unit-norm |csi| rows used by the geographic similarity metric
void refresh_norm_rows(const Eigen::MatrixXcd& csi, const std::vector<int>& user_ids,
                       std::vector<Eigen::VectorXd>& norm_rows) {
    for (int u : user_ids) {
        Eigen::VectorXd mag = csi.row(u).cwiseAbs();
        const double n = mag.norm();
        if (n > 0.0) mag /= n;
        norm_rows[u] = std::move(mag);
    }
}

void write_trace_row(std::ostream& os, int epoch, int layer, const FrameGroup& group,
                     double min_sinr, double max_sinr, double efficiency,
                     const ServeResult& served) {
    os << epoch << ',' << layer << ',' << group.beam << ',';
    for (std::size_t i = 0; i < group.users.size(); ++i) {
        if (i) os << ';';
        os << group.users[i];
    }
    os << ',' << min_sinr << ',' << max_sinr << ',' << efficiency << ',' << served.served_bits
       << ',' << served.utilization << '\n';
}

}  // namespace

LoadPoint run_load(const ScenarioConfig& config, const Preprocessed& pre, double load_gbps,
                   int load_index, std::ostream* trace) {
    const int n_users = pre.population.size();
    const int n_beams = config.n_beams;
    const int layers = config.layer_count();
    const int clusters = pre.gws.gw_count();
    const std::uint64_t run_seed =
        derive_seed(config.seed, stream::kRun, static_cast<std::uint64_t>(load_index));

    TrafficQueues queues(n_users);
    TrafficGenerator traffic(pre.population, load_gbps * 1e9, config.duty_cycle,
                             config.mean_active_epochs, pre.epoch_s, run_seed);

    // GW-side state, refreshed every csi_refresh_epochs
    std::vector<Eigen::MatrixXcd> csi(layers);
    std::vector<std::vector<Eigen::VectorXd>> norm_rows(
        layers, std::vector<Eigen::VectorXd>(n_users));
    std::vector<std::vector<int>> layer_users(layers);
    for (const User& u : pre.population.users) layer_users[pre.layer_of_user[u.id]].push_back(u.id);
    const ImpairmentStats stats = config.impairments();
    std::vector<int> serving(n_users);
    for (const User& u : pre.population.users) serving[u.id] = u.beam;

    // per-cluster beam column maps
    std::vector<std::vector<int>> cluster_beams_of(clusters);
    std::vector<int> col_in_cluster(n_beams, -1);
    for (int c = 0; c < clusters; ++c) {
        cluster_beams_of[c] = pre.gws.clusters[c];
        for (std::size_t i = 0; i < cluster_beams_of[c].size(); ++i)
            col_in_cluster[cluster_beams_of[c][i]] = static_cast<int>(i);
    }

    LoadPoint point;
    point.load_gbps = load_gbps;
    point.per_beam_served_gbps.assign(n_beams, 0.0);
    std::vector<long long> per_beam_bits(n_beams, 0);
    long long ub_bits = 0;
    double util_sum = 0.0;
    long long frames = 0;
    long long outages = 0;

    if (trace)
        *trace << "epoch,layer,beam,users,min_sinr_db,max_sinr_db,efficiency,served_bits,"
                  "utilization\n";

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        traffic.step(queues);
        try {
            for (int layer = 0; layer < layers; ++layer) {
                if (epoch % config.csi_refresh_epochs == 0) {
                    const std::uint64_t refresh = epoch / config.csi_refresh_epochs;
                    csi[layer] = impair_csi(
                        pre.layers[layer].h, serving, stats,
                        derive_seed(run_seed, stream::kCsiError, layer), refresh);
                    refresh_norm_rows(csi[layer], layer_users[layer], norm_rows[layer]);
                }

                // schedule one frame group per beam with pending traffic
                std::vector<ScheduledGroup> groups;
                std::vector<std::vector<int>> cluster_groups(clusters);
                std::vector<int> candidates;
                for (int beam = 0; beam < n_beams; ++beam) {
                    const std::vector<int>& members = pre.beam_users[layer][beam];
                    if (members.empty()) continue;
                    std::optional<int> first;
                    if (config.policy == Policy::Fair) {
                        first = select_first_user(queues, members);
                    } else {
                        Rng rng(derive_seed(run_seed, stream::kScheduler,
                                            static_cast<std::uint64_t>(epoch),
                                            static_cast<std::uint64_t>(layer),
                                            static_cast<std::uint64_t>(beam)));
                        first = random_policy_first_user(queues, members, rng);
                    }
                    if (!first) continue;  // beam idles this epoch
                    candidates.clear();
                    for (int u : members)
                        if (queues.backlog_bits[u] > 0) candidates.push_back(u);
                    ScheduledGroup g;
                    g.frame = select_group(*first, candidates, norm_rows[layer], beam,
                                           config.group_size);
                    g.cluster = pre.gws.gw_of_beam[beam];
                    g.index_in_cluster = static_cast<int>(cluster_groups[g.cluster].size());
                    cluster_groups[g.cluster].push_back(static_cast<int>(groups.size()));
                    groups.push_back(std::move(g));
                }
                if (groups.empty()) continue;

                std::vector<double> min_sinr(groups.size(),
                                             std::numeric_limits<double>::infinity());
                std::vector<double> max_sinr(groups.size(),
                                             -std::numeric_limits<double>::infinity());

                if (config.mode == Mode::Benchmark4) {
                    for (std::size_t gi = 0; gi < groups.size(); ++gi)
                        for (int u : groups[gi].frame.users) {
                            min_sinr[gi] = std::min(min_sinr[gi], pre.bench_sinr_db[u]);
                            max_sinr[gi] = std::max(max_sinr[gi], pre.bench_sinr_db[u]);
                        }
                } else {
                    // one precoder per gateway cluster from the averaged
                    // estimated rows of its scheduled groups
                    std::vector<Eigen::MatrixXcd> w(clusters);
                    for (int c = 0; c < clusters; ++c) {
                        const std::vector<int>& gids = cluster_groups[c];
                        const std::vector<int>& bcols = cluster_beams_of[c];
                        if (gids.empty()) {
                            w[c] = Eigen::MatrixXcd::Zero(bcols.size(), 0);
                            continue;
                        }
                        Eigen::MatrixXcd rows(gids.size(), bcols.size());
                        for (std::size_t r = 0; r < gids.size(); ++r) {
                            const ScheduledGroup& g = groups[gids[r]];
                            std::vector<Eigen::RowVectorXcd> member_rows;
                            member_rows.reserve(g.frame.users.size());
                            for (int u : g.frame.users) {
                                Eigen::RowVectorXcd row(bcols.size());
                                for (std::size_t bc = 0; bc < bcols.size(); ++bc)
                                    row(bc) = csi[layer](u, bcols[bc]);
                                member_rows.push_back(std::move(row));
                            }
                            rows.row(r) = average_group_channels(
                                member_rows, col_in_cluster[g.frame.beam]);
                        }
                        w[c] = mmse_precoder(rows, pre.layers[layer].noise_power,
                                             static_cast<double>(bcols.size()) * pre.tx_power_w);
                        normalize_power(w[c], pre.tx_power_w);
                    }

                    // evaluate every scheduled user against every cluster's
                    // transmission; own cluster gives the serving and
                    // intra-cluster terms, the rest is external interference
                    std::vector<int> sched_users;
                    std::vector<int> row_of(n_users, -1);
                    for (const ScheduledGroup& g : groups)
                        for (int u : g.frame.users)
                            if (row_of[u] < 0) {
                                row_of[u] = static_cast<int>(sched_users.size());
                                sched_users.push_back(u);
                            }
                    const int s_count = static_cast<int>(sched_users.size());

                    std::vector<Eigen::MatrixXcd> y(clusters);
                    Eigen::MatrixXd cluster_power(s_count, clusters);
                    for (int c = 0; c < clusters; ++c) {
                        const std::vector<int>& bcols = cluster_beams_of[c];
                        Eigen::MatrixXcd hs(s_count, bcols.size());
                        for (int r = 0; r < s_count; ++r)
                            for (std::size_t bc = 0; bc < bcols.size(); ++bc)
                                hs(r, bc) = pre.layers[layer].h(sched_users[r], bcols[bc]);
                        y[c] = hs * w[c];
                        for (int r = 0; r < s_count; ++r)
                            cluster_power(r, c) = y[c].row(r).squaredNorm();
                    }

                    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
                        const ScheduledGroup& g = groups[gi];
                        for (int u : g.frame.users) {
                            const int r = row_of[u];
                            double external = 0.0;
                            for (int c = 0; c < clusters; ++c)
                                if (c != g.cluster) external += cluster_power(r, c);
                            const double sinr = sinr_from_products(
                                y[g.cluster].row(r), g.index_in_cluster,
                                pre.layers[layer].noise_power, external);
                            min_sinr[gi] = std::min(min_sinr[gi], sinr);
                            max_sinr[gi] = std::max(max_sinr[gi], sinr);
                        }
                    }
                }

                for (std::size_t gi = 0; gi < groups.size(); ++gi) {
                    const ServeResult result =
                        serve_frame(groups[gi].frame, min_sinr[gi], config.modcod,
                                    config.bundle_payload_symbols, queues);
                    ++frames;
                    if (result.outage) {
                        ++outages;
                    } else {
                        ub_bits += result.capacity_bits;
                        util_sum += result.utilization;
                        per_beam_bits[groups[gi].frame.beam] += result.served_bits;
                    }
                    if (trace)
                        write_trace_row(*trace, epoch, layer, groups[gi].frame, min_sinr[gi],
                                        max_sinr[gi],
                                        modcod_lookup(config.modcod, min_sinr[gi]), result);
                }
            }
        } catch (const std::runtime_error&) {
            point.failed_epochs.push_back(epoch);
        }
    }

    const double duration_s = config.epochs * pre.epoch_s;
    long long offered = 0, served = 0;
    point.per_user_served_gbps.resize(n_users);
    point.per_user_offered_bits = queues.offered_bits;
    point.per_user_served_bits = queues.served_bits;
    for (int u = 0; u < n_users; ++u) {
        offered += queues.offered_bits[u];
        served += queues.served_bits[u];
        point.per_user_served_gbps[u] = queues.served_bits[u] / duration_s / 1e9;
    }
    for (int b = 0; b < n_beams; ++b)
        point.per_beam_served_gbps[b] = per_beam_bits[b] / duration_s / 1e9;
    point.offered_gbps = offered / duration_s / 1e9;
    point.served_gbps = served / duration_s / 1e9;
    point.upper_bound_gbps = ub_bits / duration_s / 1e9;
    point.mean_utilization = frames > outages ? util_sum / double(frames - outages) : 0.0;
    point.outage_fraction = frames > 0 ? double(outages) / double(frames) : 0.0;
    return point;
}

CapacityReport run_scenario(const ScenarioConfig& config, std::ostream* trace) {
    config.validate();
    const Preprocessed pre = preprocess(config);
    CapacityReport report;
    for (std::size_t i = 0; i < config.loads_gbps.size(); ++i)
        report.points.push_back(
            run_load(config, pre, config.loads_gbps[i], static_cast<int>(i), trace));
    return report;
}

CapacityReport sweep_loads(const ScenarioConfig& config, const std::vector<double>& loads) {
    ScenarioConfig swept = config;
    swept.loads_gbps = loads;
    return run_scenario(swept);
}

std::vector<GainPoint> compute_gain(const CapacityReport& precoding,
                                    const CapacityReport& benchmark) {
    if (precoding.points.size() != benchmark.points.size())
        throw std::invalid_argument("compute_gain: load grids differ in size");
    std::vector<GainPoint> gains;
    for (std::size_t i = 0; i < precoding.points.size(); ++i) {
        const LoadPoint& p = precoding.points[i];
        const LoadPoint& b = benchmark.points[i];
        if (std::abs(p.load_gbps - b.load_gbps) > 1e-9)
            throw std::invalid_argument("compute_gain: load grids do not match");
        GainPoint g;
        g.load_gbps = p.load_gbps;
        auto ratio = [&g](double num, double den) {
            if (den > 0.0) return num / den - 1.0;
            if (num > 0.0) {
                g.unbounded = true;
                return std::numeric_limits<double>::infinity();
            }
            return 0.0;
        };
        g.served_gain = ratio(p.served_gbps, b.served_gbps);
        g.ub_gain = ratio(p.upper_bound_gbps, b.upper_bound_gbps);
        gains.push_back(g);
    }
    return gains;
}

}  // namespace htsim
