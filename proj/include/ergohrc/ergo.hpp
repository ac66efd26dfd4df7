#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ergohrc/catalog.hpp"
#include "ergohrc/recognition.hpp"

namespace ergohrc {

enum class RiskClass { Low, Medium, High };

std::string risk_class_name(RiskClass risk);
RiskClass parse_risk_class(const std::string& name);

struct RiskThresholds {
    double low_max = 13.0;
    double medium_max = 22.0;
};

// Low if score <= low_max, Medium if <= medium_max, else High.
RiskClass classify_risk(double score, const RiskThresholds& thresholds = {});

// A classified window together with the catalog score of its primitive.
struct ScoredDetection {
    std::size_t window_index = 0;
    int primitive_id = 0;
    double eaws_score = 0.0;
};

std::vector<ScoredDetection> score_detections(const std::vector<Detection>& detections,
                                              const PrimitiveCatalog& catalog);

struct TaskScoreSummary {
    std::string task_id;
    std::size_t detection_count = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // population standard deviation
    double mode = 0.0;
    RiskClass risk_class = RiskClass::Low;
};

// Mean, population std, and mode of the window scores; mode ties break toward
// the lower score and the risk class comes from the mode.
TaskScoreSummary summarize_task(const std::vector<ScoredDetection>& detections,
                                const std::string& task_id,
                                const RiskThresholds& thresholds = {});

struct DelegationPlan {
    std::vector<std::string> robot_tasks;
    std::vector<std::string> human_tasks;
};

// Returns true when the task should go to the robot.
using DelegationPolicy = std::function<bool(const TaskScoreSummary&)>;

// Medium and High risk go to the robot, Low stays with the operator.
DelegationPolicy default_delegation_policy();

DelegationPlan build_delegation(const std::vector<TaskScoreSummary>& summaries,
                                const DelegationPolicy& policy = {});

void write_summary_csv(const std::vector<TaskScoreSummary>& summaries,
                       std::ostream& out);
std::vector<TaskScoreSummary> load_summary_csv(std::istream& in);

void write_delegation_csv(const DelegationPlan& plan, std::ostream& out);
void write_delegation_report(const DelegationPlan& plan, std::ostream& out);

}  // namespace ergohrc
