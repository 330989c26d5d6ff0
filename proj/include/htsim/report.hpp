#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "htsim/simulator.hpp"

namespace htsim {

// Report CSV numbers are printed with 6 significant digits; identical runs
// produce identical bytes.
std::string fmt6(double v);

// Flat per-load rows:
// load_gbps,offered_gbps,served_gbps,upper_bound_gbps,mean_utilization,outage_fraction
void write_report_csv(const CapacityReport& report, std::ostream& os);

// Reads the flat CSV back into a report (per-load scalars only).
CapacityReport parse_report_csv(std::istream& is);
CapacityReport parse_report_csv_file(const std::string& path);

// Nested report with per-beam and per-user breakdowns.
std::string report_json(const CapacityReport& report, const std::string& config_digest,
                        std::uint64_t seed);

// kind,load_gbps,served_gain_pct,ub_gain_pct,unbounded rows; the final
// max_load_summary row repeats the highest-load gains.
void write_gains_csv(const std::vector<GainPoint>& gains, std::ostream& os);

}  // namespace htsim
