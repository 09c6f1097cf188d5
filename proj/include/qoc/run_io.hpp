#pragma once

#include <string>

#include "qoc/gpm.hpp"
#include "qoc/problems.hpp"

namespace qoc {

// Quantitative proxy for "jittery near t = 0, T": largest node-to-node jump
// within the first/last `edge_fraction` of the horizon, compared against
// `range_fraction` of the control's overall range.
struct JitterReport {
    double edge_jump = 0.0;
    double range = 0.0;
    bool flagged = false;
};
JitterReport jitter_report(const ControlGrid& g, double edge_fraction = 0.05,
                           double range_fraction = 0.25);

// summary.json content; key order is stable, wall time is the only
// run-to-run varying field for a fixed config and seed.
std::string summary_json(const ProblemSpec& spec, const GPMConfig& cfg, const GPMResult& result,
                         int grid_segments, double wall_seconds);

void write_text_file(const std::string& path, const std::string& content);

// t, Re/Im of every state entry (closed) or populations, distance to target
// and entropies (open), sampled on the control grid.
void write_trajectory_csv(const ProblemSpec& spec, const ControlGrid& control,
                          const std::string& path);

}  // namespace qoc
