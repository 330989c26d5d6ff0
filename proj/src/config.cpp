#include "htsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace htsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string g17(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad number for '" + key + "': " + value);
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad integer for '" + key + "': " + value);
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw std::runtime_error("config: empty list for '" + key + "'");
    return out;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "mode", "colours", "n_beams", "radius_3db_km", "overlap_factor", "peak_sat_gain_dbi",
        "sidelobe_floor_db", "gw_count", "users_per_beam", "impairments", "est_threshold_db",
        "outdated_phase_std_deg", "main_amp_mean", "main_amp_std", "main_phase_mean",
        "main_phase_std", "intf_amp_mean", "intf_amp_std", "intf_phase_mean", "intf_phase_std",
        "policy", "frequency_ghz", "bandwidth_hz", "rolloff", "sat_power_w", "obo_db",
        "terminal_gt_dbk", "slant_range_km", "path_loss_db", "atmos_loss_db", "feed_offset_m",
        "group_size",
        "bundle_payload_symbols", "codeword_bits", "epochs", "csi_refresh_epochs", "duty_cycle",
        "mean_active_epochs", "loads_gbps", "seed", "modcod_table"};
    return keys;
}

}  // namespace

ScenarioConfig parse_config(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(line_no) +
                                     " is not 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw std::runtime_error("config: unknown key '" + key + "'");
        if (kv.count(key)) throw std::runtime_error("config: duplicate key '" + key + "'");
        kv[key] = value;
    }

    ScenarioConfig cfg;
    auto take = [&kv](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    if (const auto* v = take("mode")) {
        if (*v == "benchmark4")
            cfg.mode = Mode::Benchmark4;
        else if (*v == "precoding1")
            cfg.mode = Mode::Precoding1;
        else
            throw std::runtime_error("config: mode must be benchmark4 or precoding1");
    }

    // mode-dependent scenario-table defaults
    if (cfg.mode == Mode::Benchmark4) {
        cfg.num_colours = 4;
        cfg.link.bandwidth_hz = 250e6;
        cfg.link.sat_power_w = 100.0;
    } else {
        cfg.num_colours = 1;
        cfg.link.bandwidth_hz = 500e6;
        cfg.link.sat_power_w = 50.0;
    }

    if (const auto* v = take("colours")) cfg.num_colours = int(parse_int("colours", *v));
    if (const auto* v = take("n_beams")) cfg.n_beams = int(parse_int("n_beams", *v));
    if (const auto* v = take("radius_3db_km")) cfg.radius_3db_km = parse_double("radius_3db_km", *v);
    if (const auto* v = take("overlap_factor")) cfg.overlap_factor = parse_double("overlap_factor", *v);
    if (const auto* v = take("peak_sat_gain_dbi"))
        cfg.antenna.peak_gain_dbi = parse_double("peak_sat_gain_dbi", *v);
    if (const auto* v = take("sidelobe_floor_db"))
        cfg.antenna.floor_below_peak_db = parse_double("sidelobe_floor_db", *v);
    if (const auto* v = take("gw_count")) cfg.gw_count = int(parse_int("gw_count", *v));
    if (const auto* v = take("users_per_beam"))
        cfg.users_per_beam = int(parse_int("users_per_beam", *v));

    if (const auto* v = take("impairments")) {
        if (*v == "ideal")
            cfg.profile = Profile::Ideal;
        else if (*v == "real")
            cfg.profile = Profile::Real;
        else if (*v == "custom")
            cfg.profile = Profile::Custom;
        else
            throw std::runtime_error("config: impairments must be ideal, real or custom");
    }
    ImpairmentStats& st = cfg.custom_stats;
    if (const auto* v = take("est_threshold_db")) st.threshold_db = parse_double("est_threshold_db", *v);
    if (const auto* v = take("outdated_phase_std_deg"))
        st.outdated_phase_std_deg = parse_double("outdated_phase_std_deg", *v);
    if (const auto* v = take("main_amp_mean")) st.main_amp.mean = parse_double("main_amp_mean", *v);
    if (const auto* v = take("main_amp_std")) st.main_amp.stddev = parse_double("main_amp_std", *v);
    if (const auto* v = take("main_phase_mean")) st.main_phase.mean = parse_double("main_phase_mean", *v);
    if (const auto* v = take("main_phase_std")) st.main_phase.stddev = parse_double("main_phase_std", *v);
    if (const auto* v = take("intf_amp_mean")) st.intf_amp.mean = parse_double("intf_amp_mean", *v);
    if (const auto* v = take("intf_amp_std")) st.intf_amp.stddev = parse_double("intf_amp_std", *v);
    if (const auto* v = take("intf_phase_mean")) st.intf_phase.mean = parse_double("intf_phase_mean", *v);
    if (const auto* v = take("intf_phase_std")) st.intf_phase.stddev = parse_double("intf_phase_std", *v);

    if (const auto* v = take("policy")) {
        if (*v == "fair")
            cfg.policy = Policy::Fair;
        else if (*v == "random")
            cfg.policy = Policy::Random;
        else
            throw std::runtime_error("config: policy must be fair or random");
    }

    if (const auto* v = take("frequency_ghz")) cfg.link.frequency_ghz = parse_double("frequency_ghz", *v);
    if (const auto* v = take("bandwidth_hz")) cfg.link.bandwidth_hz = parse_double("bandwidth_hz", *v);
    if (const auto* v = take("rolloff")) cfg.link.rolloff = parse_double("rolloff", *v);
    if (const auto* v = take("sat_power_w")) cfg.link.sat_power_w = parse_double("sat_power_w", *v);
    if (const auto* v = take("obo_db")) cfg.link.obo_db = parse_double("obo_db", *v);
    if (const auto* v = take("terminal_gt_dbk"))
        cfg.link.terminal_gt_dbk = parse_double("terminal_gt_dbk", *v);
    if (const auto* v = take("slant_range_km")) cfg.link.slant_range_km = parse_double("slant_range_km", *v);
    if (const auto* v = take("path_loss_db")) cfg.link.path_loss_db = parse_double("path_loss_db", *v);
    if (const auto* v = take("atmos_loss_db")) cfg.link.atmos_loss_db = parse_double("atmos_loss_db", *v);
    if (const auto* v = take("feed_offset_m")) cfg.link.feed_offset_m = parse_double("feed_offset_m", *v);

    if (const auto* v = take("group_size")) cfg.group_size = int(parse_int("group_size", *v));
    if (const auto* v = take("bundle_payload_symbols"))
        cfg.bundle_payload_symbols = long(parse_int("bundle_payload_symbols", *v));
    if (const auto* v = take("codeword_bits")) cfg.codeword_bits = int(parse_int("codeword_bits", *v));
    if (const auto* v = take("epochs")) cfg.epochs = int(parse_int("epochs", *v));
    if (const auto* v = take("csi_refresh_epochs"))
        cfg.csi_refresh_epochs = int(parse_int("csi_refresh_epochs", *v));
    if (const auto* v = take("duty_cycle")) cfg.duty_cycle = parse_double("duty_cycle", *v);
    if (const auto* v = take("mean_active_epochs"))
        cfg.mean_active_epochs = parse_double("mean_active_epochs", *v);
    if (const auto* v = take("loads_gbps")) cfg.loads_gbps = parse_list("loads_gbps", *v);
    if (const auto* v = take("seed")) cfg.seed = std::uint64_t(parse_int("seed", *v));
    if (const auto* v = take("modcod_table")) {
        cfg.modcod_table_source = *v;
        if (*v != "default") cfg.modcod = load_modcod_csv_file(*v);
    }

    cfg.validate();
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    return parse_config(is);
}

std::string emit_config(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "mode = " << (cfg.mode == Mode::Benchmark4 ? "benchmark4" : "precoding1") << '\n';
    os << "colours = " << cfg.num_colours << '\n';
    os << "n_beams = " << cfg.n_beams << '\n';
    os << "radius_3db_km = " << g17(cfg.radius_3db_km) << '\n';
    os << "overlap_factor = " << g17(cfg.overlap_factor) << '\n';
    os << "peak_sat_gain_dbi = " << g17(cfg.antenna.peak_gain_dbi) << '\n';
    os << "sidelobe_floor_db = " << g17(cfg.antenna.floor_below_peak_db) << '\n';
    os << "gw_count = " << cfg.gw_count << '\n';
    os << "users_per_beam = " << cfg.users_per_beam << '\n';
    os << "impairments = "
       << (cfg.profile == Profile::Ideal ? "ideal"
                                         : cfg.profile == Profile::Real ? "real" : "custom")
       << '\n';
    const ImpairmentStats& st = cfg.custom_stats;
    os << "est_threshold_db = " << g17(st.threshold_db) << '\n';
    os << "outdated_phase_std_deg = " << g17(st.outdated_phase_std_deg) << '\n';
    os << "main_amp_mean = " << g17(st.main_amp.mean) << '\n';
    os << "main_amp_std = " << g17(st.main_amp.stddev) << '\n';
    os << "main_phase_mean = " << g17(st.main_phase.mean) << '\n';
    os << "main_phase_std = " << g17(st.main_phase.stddev) << '\n';
    os << "intf_amp_mean = " << g17(st.intf_amp.mean) << '\n';
    os << "intf_amp_std = " << g17(st.intf_amp.stddev) << '\n';
    os << "intf_phase_mean = " << g17(st.intf_phase.mean) << '\n';
    os << "intf_phase_std = " << g17(st.intf_phase.stddev) << '\n';
    os << "policy = " << (cfg.policy == Policy::Fair ? "fair" : "random") << '\n';
    os << "frequency_ghz = " << g17(cfg.link.frequency_ghz) << '\n';
    os << "bandwidth_hz = " << g17(cfg.link.bandwidth_hz) << '\n';
    os << "rolloff = " << g17(cfg.link.rolloff) << '\n';
    os << "sat_power_w = " << g17(cfg.link.sat_power_w) << '\n';
    os << "obo_db = " << g17(cfg.link.obo_db) << '\n';
    os << "terminal_gt_dbk = " << g17(cfg.link.terminal_gt_dbk) << '\n';
    os << "slant_range_km = " << g17(cfg.link.slant_range_km) << '\n';
    os << "path_loss_db = " << g17(cfg.link.path_loss_db) << '\n';
    os << "atmos_loss_db = " << g17(cfg.link.atmos_loss_db) << '\n';
    os << "feed_offset_m = " << g17(cfg.link.feed_offset_m) << '\n';
    os << "group_size = " << cfg.group_size << '\n';
    os << "bundle_payload_symbols = " << cfg.bundle_payload_symbols << '\n';
    os << "codeword_bits = " << cfg.codeword_bits << '\n';
    os << "epochs = " << cfg.epochs << '\n';
    os << "csi_refresh_epochs = " << cfg.csi_refresh_epochs << '\n';
    os << "duty_cycle = " << g17(cfg.duty_cycle) << '\n';
    os << "mean_active_epochs = " << g17(cfg.mean_active_epochs) << '\n';
    os << "loads_gbps = ";
    for (std::size_t i = 0; i < cfg.loads_gbps.size(); ++i)
        os << (i ? "," : "") << g17(cfg.loads_gbps[i]);
    os << '\n';
    os << "seed = " << cfg.seed << '\n';
    os << "modcod_table = " << cfg.modcod_table_source << '\n';
    return os.str();
}

std::string config_digest(const ScenarioConfig& cfg) {
    const std::string text = emit_config(cfg);
    std::uint64_t hash = 1469598103934665603ULL;  // FNV-1a 64
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string manifest_json(const RunManifest& manifest) {
    nlohmann::json j;
    j["artifact_version"] = manifest.artifact_version;
    j["config_digest"] = manifest.config_digest;
    j["seed"] = manifest.seed;
    j["created_utc"] = manifest.created_utc;
    j["outputs"] = manifest.outputs;
    return j.dump(2) + "\n";
}

}  // namespace htsim
