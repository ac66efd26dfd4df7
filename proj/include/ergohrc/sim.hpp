#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergohrc/catalog.hpp"
#include "ergohrc/kpi.hpp"
#include "ergohrc/mocap.hpp"
#include "ergohrc/spatial.hpp"
#include "ergohrc/workflow.hpp"

namespace ergohrc {

// Deterministic seed plumbing. Per-operator seeds derive from a root seed and
// the operator id, so adding operators never perturbs existing streams.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

struct SyntheticOperatorProfile {
    std::string operator_id;
    double scale = 1.0;           // dimensionless, scales reach positions
    double angle_noise = 3.0;     // degrees
    double position_noise = 1.0;  // cm
    std::uint64_t seed = 0;

    void validate() const;  // scale > 0, noise >= 0
};

std::vector<SyntheticOperatorProfile> make_operator_profiles(std::uint64_t root_seed,
                                                             std::size_t count);

// Piecewise-linear interpolation through the entry's keyframes at 90 fps with
// Gaussian angle noise. Identical (profile, salt) pairs give identical clips.
MotionClip synthesize_primitive_clip(const PrimitiveEntry& entry,
                                     const SyntheticOperatorProfile& profile,
                                     double duration_s,
                                     double frame_rate = kDefaultFrameRate,
                                     std::uint64_t salt = 0);

// Concatenation of one-window primitive segments.
MotionClip synthesize_task_recording(const std::vector<int>& primitive_ids,
                                     const SyntheticOperatorProfile& profile,
                                     const PrimitiveCatalog& catalog,
                                     double window_seconds = 5.0,
                                     double frame_rate = kDefaultFrameRate);

// Task specs whose dominant primitives echo the shipped catalog's medium and
// low risk bands: T1/T2 delegate to the robot, T3/T4 stay with the operator.
std::vector<std::pair<std::string, std::vector<int>>> default_task_specs();

enum class ExperimentMode { NoGrNoSa, GrOnly, GrPlusSa };

std::string experiment_mode_name(ExperimentMode mode);

// Wider sphere than the spatial default so scaled-up operators stay reachable.
HandoverGeometry default_experiment_geometry();

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::NoGrNoSa;
    std::size_t repetitions = 1;
    HandoverGeometry geometry = default_experiment_geometry();
    WorkflowDefinition workflow = tv_assembly_workflow();
    // Wrist-path length of one walk-to-the-panel excursion at scale 1. In the
    // baseline mode every gesture command becomes one such excursion.
    double excursion_cm = 15.0;
    std::size_t frame_budget = 100000;  // gesture frames per routine before failing

    void validate() const;
};

struct OperatorRunResult {
    std::string operator_id;
    bool completed = false;
    RoutineTrace trace;
    MotionRecord path;           // operator wrist path for this mode
    MotionRecord baseline_path;  // the NoGrNoSa path for the same operator
    std::vector<HandoverTrial> handovers;
    bool adapted = false;  // any handover actually adapted
    KpiRecord kpi;
};

struct ExperimentResult {
    ExperimentMode mode = ExperimentMode::NoGrNoSa;
    std::vector<OperatorRunResult> runs;

    std::vector<KpiRecord> kpis() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::vector<SyntheticOperatorProfile>& profiles);

// The three-experiment protocol: baseline, gesture recognition only, and
// gesture recognition plus spatial adaptation. The combined table reports SA
// from the adaptive run and RiOM from the gesture-only run.
struct ThreeExperimentReport {
    ExperimentResult baseline;
    ExperimentResult gr_only;
    ExperimentResult gr_plus_sa;
    std::vector<KpiRecord> combined;
};

ThreeExperimentReport run_three_experiments(
    const ExperimentConfig& base,
    const std::vector<SyntheticOperatorProfile>& profiles);

}  // namespace ergohrc
