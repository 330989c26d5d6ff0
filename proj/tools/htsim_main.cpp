// htsim: multibeam forward-link capacity simulator CLI.
//
// Subcommands:
//   run      one scenario at one load; writes report.json/report.csv
//   sweep    scenario across a load grid; writes sweep.csv/sweep.json
//   compare  gain of a precoding sweep over a benchmark sweep; writes gains.csv
//
// All randomness flows from --seed (or the config seed); outputs are
// byte-identical for identical config + seed.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "htsim/config.hpp"
#include "htsim/report.hpp"
#include "htsim/simulator.hpp"

namespace {

using namespace htsim;

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string default_out_dir() {
    const char* env = std::getenv("HTSIM_OUT_DIR");
    return env && *env ? env : ".";
}

// Tracks files written by one command so a failure removes partial outputs.
class OutputSet {
  public:
    explicit OutputSet(std::string dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    std::string path(const std::string& name) const { return dir_ + "/" + name; }

    void write(const std::string& name, const std::string& content) {
        const std::string p = path(name);
        std::ofstream os(p, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + p);
        os << content;
        if (!os) throw std::runtime_error("write failed for " + p);
        names_.push_back(name);
    }

    void discard_all() {
        for (const std::string& name : names_) std::remove(path(name).c_str());
        names_.clear();
    }

    const std::vector<std::string>& names() const { return names_; }

  private:
    std::string dir_;
    std::vector<std::string> names_;
};

void write_manifest(OutputSet& out, const ScenarioConfig* cfg, const std::string& name) {
    RunManifest manifest;
    manifest.artifact_version = kArtifactVersion;
    manifest.config_digest = cfg ? config_digest(*cfg) : "";
    manifest.seed = cfg ? cfg->seed : 0;
    manifest.created_utc = utc_now();
    manifest.outputs = out.names();
    out.write(name, manifest_json(manifest));
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = default_out_dir();
    std::string scenario;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void apply_scenario_preset(ScenarioConfig& cfg, const std::string& name) {
    auto precoding = [&cfg](int gws, Profile profile) {
        cfg.mode = Mode::Precoding1;
        cfg.num_colours = 1;
        cfg.link.bandwidth_hz = 500e6;
        cfg.link.sat_power_w = 50.0;
        cfg.gw_count = gws;
        cfg.profile = profile;
    };
    if (name == "benchmark" || name == "benchmark_ideal" || name == "benchmark_real") {
        cfg.mode = Mode::Benchmark4;
        cfg.num_colours = 4;
        cfg.link.bandwidth_hz = 250e6;
        cfg.link.sat_power_w = 100.0;
        cfg.gw_count = 1;
        if (name != "benchmark") cfg.profile = name == "benchmark_real" ? Profile::Real : Profile::Ideal;
    } else if (name == "single_ideal") {
        precoding(1, Profile::Ideal);
    } else if (name == "single_real") {
        precoding(1, Profile::Real);
    } else if (name == "multi_ideal") {
        precoding(9, Profile::Ideal);
    } else if (name == "multi_real") {
        precoding(9, Profile::Real);
    } else {
        throw std::runtime_error("unknown scenario preset '" + name + "'");
    }
}

ScenarioConfig load_config(const CommonOpts& opts) {
    ScenarioConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = parse_config_file(opts.config_path);
    } else {
        std::istringstream empty;
        cfg = parse_config(empty);  // scenario-table defaults
    }
    if (!opts.scenario.empty()) apply_scenario_preset(cfg, opts.scenario);
    if (opts.seed_set) cfg.seed = opts.seed;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "scenario config file");
    cmd->add_option("--out", opts.out_dir, "output directory (default $HTSIM_OUT_DIR or .)");
    cmd->add_option("--scenario", opts.scenario,
                    "preset: benchmark[_ideal|_real], single_ideal, single_real, multi_ideal, "
                    "multi_real");
    cmd->add_option("--seed", opts.seed, "override the config seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
}

int cmd_run(const CommonOpts& opts, double load_override, bool load_set, bool trace,
            bool dump_grid, bool dump_users, bool dump_channel) {
    ScenarioConfig cfg = load_config(opts);
    if (load_set)
        cfg.loads_gbps = {load_override};
    else
        cfg.loads_gbps = {cfg.loads_gbps.front()};
    cfg.validate();

    OutputSet out(opts.out_dir);
    try {
        std::ostringstream trace_os;
        CapacityReport report = run_scenario(cfg, trace ? &trace_os : nullptr);

        std::ostringstream csv;
        write_report_csv(report, csv);
        out.write("report.csv", csv.str());
        out.write("report.json", report_json(report, config_digest(cfg), cfg.seed));
        if (trace) out.write("trace.csv", trace_os.str());

        if (dump_grid || dump_users || dump_channel) {
            const Preprocessed pre = preprocess(cfg);
            if (dump_grid) {
                std::ostringstream os;
                write_grid_csv(pre.grid, os);
                out.write("grid.csv", os.str());
            }
            if (dump_users) {
                std::ostringstream os;
                write_users_csv(pre.population, os);
                out.write("users.csv", os.str());
            }
            if (dump_channel) {
                std::ostringstream os;
                write_channel_csv(pre.layers[0], os);
                out.write("channel.csv", os.str());
            }
        }
        write_manifest(out, &cfg, "run_manifest.json");
    } catch (...) {
        out.discard_all();
        throw;
    }
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<double>& loads) {
    ScenarioConfig cfg = load_config(opts);
    if (!loads.empty()) cfg.loads_gbps = loads;
    cfg.validate();

    OutputSet out(opts.out_dir);
    try {
        CapacityReport report = run_scenario(cfg);
        std::ostringstream csv;
        write_report_csv(report, csv);
        out.write("sweep.csv", csv.str());
        out.write("sweep.json", report_json(report, config_digest(cfg), cfg.seed));
        write_manifest(out, &cfg, "sweep_manifest.json");
    } catch (...) {
        out.discard_all();
        throw;
    }
    return 0;
}

int cmd_compare(const std::string& precoding_csv, const std::string& benchmark_csv,
                const std::string& out_dir) {
    const CapacityReport precoding = parse_report_csv_file(precoding_csv);
    const CapacityReport benchmark = parse_report_csv_file(benchmark_csv);
    const std::vector<GainPoint> gains = compute_gain(precoding, benchmark);

    OutputSet out(out_dir);
    try {
        std::ostringstream os;
        write_gains_csv(gains, os);
        out.write("gains.csv", os.str());
        write_manifest(out, nullptr, "compare_manifest.json");
    } catch (...) {
        out.discard_all();
        throw;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"htsim: multibeam HTS forward-link capacity simulator"};
    app.require_subcommand(1);

    CommonOpts run_opts, sweep_opts;
    double run_load = 0.0;
    bool run_trace = false, dump_grid = false, dump_users = false, dump_channel = false;
    std::vector<double> sweep_loads_opt;
    std::string cmp_precoding, cmp_benchmark, cmp_out = default_out_dir();

    CLI::App* run = app.add_subcommand("run", "run one scenario at a single load");
    add_common(run, run_opts);
    CLI::Option* load_opt =
        run->add_option("--load", run_load, "offered load per beam in Gbit/s");
    run->add_flag("--trace", run_trace, "write the per-frame schedule trace");
    run->add_flag("--dump-grid", dump_grid, "write beam grid CSV");
    run->add_flag("--dump-users", dump_users, "write user population CSV");
    run->add_flag("--dump-channel", dump_channel, "write layer-0 channel CSV");

    CLI::App* sweep = app.add_subcommand("sweep", "run a load sweep");
    add_common(sweep, sweep_opts);
    sweep->add_option("--loads", sweep_loads_opt, "loads in Gbit/s (overrides config)")
        ->delimiter(',');

    CLI::App* compare = app.add_subcommand("compare", "gain of one sweep over another");
    compare->add_option("--precoding", cmp_precoding, "precoding sweep.csv")->required();
    compare->add_option("--benchmark", cmp_benchmark, "benchmark sweep.csv")->required();
    compare->add_option("--out", cmp_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(run_opts, run_load, load_opt->count() > 0, run_trace, dump_grid,
                           dump_users, dump_channel);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_loads_opt);
        if (compare->parsed()) return cmd_compare(cmp_precoding, cmp_benchmark, cmp_out);
    } catch (const std::exception& e) {
        std::cerr << "htsim: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
