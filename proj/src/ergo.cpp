#include "ergohrc/ergo.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "ergohrc/errors.hpp"
#include "text_util.hpp"

namespace ergohrc {

std::string risk_class_name(RiskClass risk) {
    switch (risk) {
        case RiskClass::Low: return "Low";
        case RiskClass::Medium: return "Medium";
        case RiskClass::High: return "High";
    }
    throw ValidationError("bad risk class value");
}

RiskClass parse_risk_class(const std::string& name) {
    if (name == "Low") return RiskClass::Low;
    if (name == "Medium") return RiskClass::Medium;
    if (name == "High") return RiskClass::High;
    throw ValidationError("unknown risk class '" + name + "'");
}

RiskClass classify_risk(double score, const RiskThresholds& thresholds) {
    if (!(thresholds.low_max < thresholds.medium_max))
        throw ValidationError("risk thresholds must satisfy low_max < medium_max");
    if (score < kEawsMin || score > kEawsMax)
        throw ValidationError("EAWS score outside [0.5, 26.5]");
    if (score <= thresholds.low_max) return RiskClass::Low;
    if (score <= thresholds.medium_max) return RiskClass::Medium;
    return RiskClass::High;
}

std::vector<ScoredDetection> score_detections(const std::vector<Detection>& detections,
                                              const PrimitiveCatalog& catalog) {
    std::vector<ScoredDetection> scored;
    scored.reserve(detections.size());
    for (const auto& d : detections)
        scored.push_back({d.window_index, d.primitive_id,
                          catalog.entry(d.primitive_id).eaws_score});
    return scored;
}

TaskScoreSummary summarize_task(const std::vector<ScoredDetection>& detections,
                                const std::string& task_id,
                                const RiskThresholds& thresholds) {
    if (detections.empty())
        throw ValidationError("task '" + task_id + "' has no detections");

    TaskScoreSummary summary;
    summary.task_id = task_id;
    summary.detection_count = detections.size();

    double sum = 0.0;
    // Scores are catalog constants, so exact keys are safe for the mode count.
    std::map<double, std::size_t> counts;
    for (const auto& d : detections) {
        sum += d.eaws_score;
        ++counts[d.eaws_score];
    }
    const double n = static_cast<double>(detections.size());
    summary.mean = sum / n;

    double sq = 0.0;
    for (const auto& d : detections) {
        const double diff = d.eaws_score - summary.mean;
        sq += diff * diff;
    }
    summary.std_dev = std::sqrt(sq / n);

    // Ascending map order plus strict > keeps the lower score on count ties.
    std::size_t best_count = 0;
    for (const auto& [score, count] : counts) {
        if (count > best_count) {
            best_count = count;
            summary.mode = score;
        }
    }
    summary.risk_class = classify_risk(summary.mode, thresholds);
    return summary;
}

DelegationPolicy default_delegation_policy() {
    return [](const TaskScoreSummary& s) {
        return s.risk_class == RiskClass::Medium || s.risk_class == RiskClass::High;
    };
}

DelegationPlan build_delegation(const std::vector<TaskScoreSummary>& summaries,
                                const DelegationPolicy& policy) {
    if (summaries.empty()) throw ValidationError("no task summaries to delegate");
    const DelegationPolicy& to_robot = policy ? policy : default_delegation_policy();
    DelegationPlan plan;
    for (const auto& s : summaries) {
        if (to_robot(s))
            plan.robot_tasks.push_back(s.task_id);
        else
            plan.human_tasks.push_back(s.task_id);
    }
    std::sort(plan.robot_tasks.begin(), plan.robot_tasks.end());
    std::sort(plan.human_tasks.begin(), plan.human_tasks.end());
    return plan;
}

void write_summary_csv(const std::vector<TaskScoreSummary>& summaries,
                       std::ostream& out) {
    out << "task_id,detection_count,mean,std,mode,risk_class\n";
    for (const auto& s : summaries) {
        out << s.task_id << ',' << s.detection_count << ','
            << detail::format_exact(s.mean) << ',' << detail::format_exact(s.std_dev)
            << ',' << detail::format_exact(s.mode) << ','
            << risk_class_name(s.risk_class) << '\n';
    }
}

std::vector<TaskScoreSummary> load_summary_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty summary CSV");
    ++line_no;
    if (detail::trim(line) != "task_id,detection_count,mean,std,mode,risk_class")
        throw ParseError("unexpected summary CSV header", line_no);

    std::vector<TaskScoreSummary> summaries;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split(detail::trim(line), ',');
        if (fields.size() != 6) throw ParseError("expected 6 fields", line_no);
        TaskScoreSummary s;
        s.task_id = std::string(fields[0]);
        const auto count = detail::parse_int(fields[1]);
        const auto mean = detail::parse_double(fields[2]);
        const auto std_dev = detail::parse_double(fields[3]);
        const auto mode = detail::parse_double(fields[4]);
        if (!count || *count < 0 || !mean || !std_dev || !mode)
            throw ParseError("bad numeric field", line_no);
        s.detection_count = static_cast<std::size_t>(*count);
        s.mean = *mean;
        s.std_dev = *std_dev;
        s.mode = *mode;
        s.risk_class = parse_risk_class(std::string(fields[5]));
        summaries.push_back(std::move(s));
    }
    return summaries;
}

void write_delegation_csv(const DelegationPlan& plan, std::ostream& out) {
    out << "task_id,assignee\n";
    for (const auto& t : plan.robot_tasks) out << t << ",robot\n";
    for (const auto& t : plan.human_tasks) out << t << ",human\n";
}

void write_delegation_report(const DelegationPlan& plan, std::ostream& out) {
    out << "Delegation plan\n";
    out << "  robot:";
    if (plan.robot_tasks.empty()) out << " (none)";
    for (const auto& t : plan.robot_tasks) out << ' ' << t;
    out << "\n  human:";
    if (plan.human_tasks.empty()) out << " (none)";
    for (const auto& t : plan.human_tasks) out << ' ' << t;
    out << "\n";
}

}  // namespace ergohrc
