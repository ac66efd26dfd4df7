#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ergohrc/geometry.hpp"

namespace ergohrc {

// One handover in robot-frame centimeters: waiting point, default handover,
// and the position actually used.
struct HandoverTrial {
    Vec3 waiting_point;     // WP
    Vec3 default_handover;  // PHP
    Vec3 adapted_handover;  // AHP
};

// Spatial adaptation: 100 * (|AHP-WP| - |PHP-WP|) / |PHP-WP|, sign preserved.
double spatial_adaptation_kpi(const HandoverTrial& trial);

// Total path length: sum of consecutive Euclidean displacements.
double motion_magnitude(const std::vector<Vec3>& path);

struct MotionRecord {
    std::vector<Vec3> path;  // tracked joint positions, centimeters
    double magnitude = 0.0;
};

MotionRecord make_motion_record(std::vector<Vec3> path);

// Reduction in operator motion: 100 * (Mwo - Mw) / Mwo over the magnitudes.
double riom_kpi(const MotionRecord& without_gr, const MotionRecord& with_gr);

struct KpiRecord {
    std::string operator_id;
    double sa_percent = 0.0;
    double riom_percent = 0.0;
};

struct KpiAggregate {
    double mean_sa = 0.0;
    double mean_riom = 0.0;
};

// Arithmetic means in full precision; rounding happens at display time.
KpiAggregate aggregate_kpis(const std::vector<KpiRecord>& records);

// Half-away-from-zero rounding to the given number of decimals.
double round_half_away(double value, int decimals);

// One row per operator plus a final mean row, percentages at 2 decimals.
void write_kpi_csv(const std::vector<KpiRecord>& records, std::ostream& out);

}  // namespace ergohrc
