#include "htsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace htsim {

std::string fmt6(double v) {
    char buf[40];
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_report_csv(const CapacityReport& report, std::ostream& os) {
    os << "load_gbps,offered_gbps,served_gbps,upper_bound_gbps,mean_utilization,"
          "outage_fraction\n";
    for (const LoadPoint& p : report.points)
        os << fmt6(p.load_gbps) << ',' << fmt6(p.offered_gbps) << ',' << fmt6(p.served_gbps)
           << ',' << fmt6(p.upper_bound_gbps) << ',' << fmt6(p.mean_utilization) << ','
           << fmt6(p.outage_fraction) << '\n';
}

CapacityReport parse_report_csv(std::istream& is) {
    CapacityReport report;
    std::string line;
    if (!std::getline(is, line) || line.rfind("load_gbps,offered_gbps,served_gbps", 0) != 0)
        throw std::runtime_error("report csv: missing header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
        if (cells.size() != 6) throw std::runtime_error("report csv: bad row '" + line + "'");
        LoadPoint p;
        p.load_gbps = cells[0];
        p.offered_gbps = cells[1];
        p.served_gbps = cells[2];
        p.upper_bound_gbps = cells[3];
        p.mean_utilization = cells[4];
        p.outage_fraction = cells[5];
        report.points.push_back(std::move(p));
    }
    return report;
}

CapacityReport parse_report_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("report csv: cannot open " + path);
    return parse_report_csv(is);
}

std::string report_json(const CapacityReport& report, const std::string& config_digest,
                        std::uint64_t seed) {
    nlohmann::json j;
    j["config_digest"] = config_digest;
    j["seed"] = seed;
    j["points"] = nlohmann::json::array();
    for (const LoadPoint& p : report.points) {
        nlohmann::json jp;
        jp["load_gbps"] = p.load_gbps;
        jp["offered_gbps"] = p.offered_gbps;
        jp["served_gbps"] = p.served_gbps;
        jp["upper_bound_gbps"] = p.upper_bound_gbps;
        jp["mean_utilization"] = p.mean_utilization;
        jp["outage_fraction"] = p.outage_fraction;
        jp["per_beam_served_gbps"] = p.per_beam_served_gbps;
        jp["per_user_served_gbps"] = p.per_user_served_gbps;
        if (!p.failed_epochs.empty()) jp["failed_epochs"] = p.failed_epochs;
        j["points"].push_back(std::move(jp));
    }
    return j.dump(2) + "\n";
}

void write_gains_csv(const std::vector<GainPoint>& gains, std::ostream& os) {
    os << "kind,load_gbps,served_gain_pct,ub_gain_pct,unbounded\n";
    const GainPoint* at_max = nullptr;
    for (const GainPoint& g : gains) {
        os << "point," << fmt6(g.load_gbps) << ',' << fmt6(100.0 * g.served_gain) << ','
           << fmt6(100.0 * g.ub_gain) << ',' << (g.unbounded ? 1 : 0) << '\n';
        if (!at_max || g.load_gbps > at_max->load_gbps) at_max = &g;
    }
    if (at_max)
        os << "max_load_summary," << fmt6(at_max->load_gbps) << ','
           << fmt6(100.0 * at_max->served_gain) << ',' << fmt6(100.0 * at_max->ub_gain) << ','
           << (at_max->unbounded ? 1 : 0) << '\n';
}

}  // namespace htsim
