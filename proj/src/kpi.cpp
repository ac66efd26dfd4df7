#include "ergohrc/kpi.hpp"

#include <cmath>
#include <ostream>

#include "ergohrc/errors.hpp"
#include "text_util.hpp"

namespace ergohrc {

double spatial_adaptation_kpi(const HandoverTrial& trial) {
    const double reference = distance(trial.default_handover, trial.waiting_point);
    if (!(reference > 0.0))
        throw ValidationError("default handover coincides with the waiting point");
    const double adapted = distance(trial.adapted_handover, trial.waiting_point);
    return 100.0 * (adapted - reference) / reference;
}

double motion_magnitude(const std::vector<Vec3>& path) {
    if (path.empty()) throw ValidationError("motion path has no points");
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        total += distance(path[i], path[i + 1]);
    return total;
}

MotionRecord make_motion_record(std::vector<Vec3> path) {
    MotionRecord record;
    record.magnitude = motion_magnitude(path);
    record.path = std::move(path);
    return record;
}

double riom_kpi(const MotionRecord& without_gr, const MotionRecord& with_gr) {
    if (!(without_gr.magnitude > 0.0))
        throw ValidationError("baseline motion magnitude must be positive");
    return 100.0 * (without_gr.magnitude - with_gr.magnitude) / without_gr.magnitude;
}

KpiAggregate aggregate_kpis(const std::vector<KpiRecord>& records) {
    if (records.empty()) throw ValidationError("no KPI records to aggregate");
    KpiAggregate agg;
    for (const auto& r : records) {
        agg.mean_sa += r.sa_percent;
        agg.mean_riom += r.riom_percent;
    }
    const double n = static_cast<double>(records.size());
    agg.mean_sa /= n;
    agg.mean_riom /= n;
    return agg;
}

double round_half_away(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

namespace {

std::string percent_cell(double value) {
    return detail::format_fixed(round_half_away(value, 2), 2);
}

}  // namespace

void write_kpi_csv(const std::vector<KpiRecord>& records, std::ostream& out) {
    out << "operator_id,sa_percent,riom_percent\n";
    for (const auto& r : records)
        out << r.operator_id << ',' << percent_cell(r.sa_percent) << ','
            << percent_cell(r.riom_percent) << '\n';
    const auto agg = aggregate_kpis(records);
    out << "mean," << percent_cell(agg.mean_sa) << ',' << percent_cell(agg.mean_riom)
        << '\n';
}

}  // namespace ergohrc
