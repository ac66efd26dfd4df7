#include "ergohrc/sim.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "ergohrc/errors.hpp"
#include "ergohrc/recognition.hpp"
#include "ergohrc/transport.hpp"

namespace ergohrc {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view label) {
    return splitmix64(root ^ fnv1a64(label));
}

namespace {

// Hand-rolled draws so streams do not depend on library distribution details.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal(std::mt19937_64& rng, double sigma) {
    if (sigma == 0.0) return 0.0;
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01(rng);
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793 * u2);
}

Vec3 jitter(std::mt19937_64& rng, double sigma) {
    return {normal(rng, sigma), normal(rng, sigma), normal(rng, sigma)};
}

}  // namespace

void SyntheticOperatorProfile::validate() const {
    if (operator_id.empty()) throw ValidationError("operator id must not be empty");
    if (!(scale > 0.0)) throw ValidationError("operator scale must be positive");
    if (angle_noise < 0.0 || position_noise < 0.0)
        throw ValidationError("noise sigma must be non-negative");
}

std::vector<SyntheticOperatorProfile> make_operator_profiles(std::uint64_t root_seed,
                                                             std::size_t count) {
    if (count == 0) throw ValidationError("need at least one operator");
    std::vector<SyntheticOperatorProfile> profiles;
    profiles.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        char id[32];
        std::snprintf(id, sizeof(id), "op%02zu", i + 1);
        SyntheticOperatorProfile p;
        p.operator_id = id;
        p.seed = derive_seed(root_seed, p.operator_id);
        std::mt19937_64 rng(derive_seed(p.seed, "scale"));
        p.scale = 0.9 + 0.2 * uniform01(rng);
        profiles.push_back(std::move(p));
    }
    return profiles;
}

MotionClip synthesize_primitive_clip(const PrimitiveEntry& entry,
                                     const SyntheticOperatorProfile& profile,
                                     double duration_s, double frame_rate,
                                     std::uint64_t salt) {
    profile.validate();
    if (entry.keyframes.size() < 2)
        throw ValidationError("primitive " + std::to_string(entry.id) +
                              " needs at least 2 keyframes");
    const long frames = std::lround(duration_s * frame_rate);
    if (frames < 2) throw ValidationError("clip duration shorter than 2 frames");

    const std::size_t arity = entry.keyframes.front().size();
    std::mt19937_64 rng(derive_seed(profile.seed, "clip:" + entry.name + ":" +
                                                      std::to_string(salt)));

    MotionClip clip;
    clip.frame_rate = frame_rate;
    clip.label = entry.name;
    if (arity == reduced_sensor_set().size() * 3) {
        clip.channels = reduced_sensor_set();
    } else {
        for (std::size_t c = 0; c < arity / 3; ++c)
            clip.channels.push_back({"Channel" + std::to_string(c)});
    }

    const std::size_t segments = entry.keyframes.size() - 1;
    for (long t = 0; t < frames; ++t) {
        const double u = static_cast<double>(t) / static_cast<double>(frames - 1);
        const double pos = u * static_cast<double>(segments);
        std::size_t k0 = static_cast<std::size_t>(pos);
        if (k0 >= segments) k0 = segments - 1;
        const double frac = pos - static_cast<double>(k0);

        JointAngleFrame frame;
        frame.timestamp = static_cast<double>(t) / frame_rate;
        frame.angles.reserve(arity);
        for (std::size_t d = 0; d < arity; ++d) {
            const double base = (1.0 - frac) * entry.keyframes[k0][d] +
                                frac * entry.keyframes[k0 + 1][d];
            frame.angles.push_back(base + normal(rng, profile.angle_noise));
        }
        clip.frames.push_back(std::move(frame));
    }
    clip.validate();
    return clip;
}

MotionClip synthesize_task_recording(const std::vector<int>& primitive_ids,
                                     const SyntheticOperatorProfile& profile,
                                     const PrimitiveCatalog& catalog,
                                     double window_seconds, double frame_rate) {
    if (primitive_ids.empty()) throw ValidationError("task spec has no primitives");

    MotionClip task;
    task.frame_rate = frame_rate;
    task.label = "task";
    std::size_t global = 0;
    for (std::size_t i = 0; i < primitive_ids.size(); ++i) {
        const auto& entry = catalog.entry(primitive_ids[i]);
        MotionClip segment =
            synthesize_primitive_clip(entry, profile, window_seconds, frame_rate, i);
        if (task.channels.empty()) task.channels = segment.channels;
        for (auto& frame : segment.frames) {
            frame.timestamp = static_cast<double>(global++) / frame_rate;
            task.frames.push_back(std::move(frame));
        }
    }
    task.validate();
    return task;
}

std::vector<std::pair<std::string, std::vector<int>>> default_task_specs() {
    return {
        {"T1", {9, 9, 3}},
        {"T2", {8, 8, 5}},
        {"T3", {4, 4, 1}},
        {"T4", {6, 6, 2}},
    };
}

std::string experiment_mode_name(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::NoGrNoSa: return "NoGrNoSa";
        case ExperimentMode::GrOnly: return "GrOnly";
        case ExperimentMode::GrPlusSa: return "GrPlusSa";
    }
    throw ValidationError("bad experiment mode value");
}

HandoverGeometry default_experiment_geometry() {
    HandoverGeometry g = default_handover_geometry();
    g.workspace_radius = 60.0;
    return g;
}

void ExperimentConfig::validate() const {
    if (repetitions == 0) throw ValidationError("repetitions must be >= 1");
    if (!(excursion_cm > 0.0)) throw ValidationError("excursion length must be positive");
    if (frame_budget == 0) throw ValidationError("frame budget must be >= 1");
    geometry.validate();
}

std::vector<KpiRecord> ExperimentResult::kpis() const {
    std::vector<KpiRecord> records;
    records.reserve(runs.size());
    for (const auto& run : runs) records.push_back(run.kpi);
    return records;
}

namespace {

struct Waypoints {
    Vec3 neutral;
    Vec3 fixture_green;
    Vec3 fixture_gold;
};

Waypoints operator_waypoints(const SyntheticOperatorProfile& profile) {
    std::mt19937_64 rng(derive_seed(profile.seed, "waypoints"));
    const double s = profile.scale;
    Waypoints w;
    w.neutral = Vec3{44.0 * s, 10.0 * s, 18.0 * s} + jitter(rng, profile.position_noise);
    w.fixture_green =
        Vec3{30.0 * s, -25.0 * s, 8.0 * s} + jitter(rng, profile.position_noise);
    w.fixture_gold =
        Vec3{30.0 * s, 25.0 * s, 8.0 * s} + jitter(rng, profile.position_noise);
    return w;
}

// The nine-command routine script. The force press is the only non-gesture.
const std::vector<Command>& routine_script() {
    static const std::vector<Command> script = {
        Command{Gesture::Start},          Command{ForcePress{}},
        Command{Gesture::GreenFunctioning}, Command{Gesture::PlaceGreenCard},
        Command{Gesture::ScrewGreenCard},  Command{Gesture::GoldFunctioning},
        Command{Gesture::PlaceGoldCard},   Command{Gesture::ScrewGoldCard},
        Command{Gesture::End},
    };
    return script;
}

// Walks the script once and appends the wrist waypoints for one repetition.
// Excursions (baseline mode only) are an exact out-and-back of half_exc * 2.
void append_routine_path(std::vector<Vec3>& path, const Waypoints& w,
                         const Vec3& hp_green, const Vec3& hp_gold,
                         bool with_excursions, double half_exc) {
    const Vec3 panel_step{0.0, -half_exc, 0.0};
    auto excursion = [&]() {
        if (!with_excursions) return;
        path.push_back(path.back() + panel_step);
        path.push_back(path.back() - panel_step);
    };
    auto leg = [&](const Vec3& target) {
        path.push_back(target);
        path.push_back(w.neutral);
    };

    excursion();           // G1 Start
    leg(hp_green);         // receive green card, press at the handover point
    excursion();           // G2 green functioning
    excursion();           // G3 place green
    leg(w.fixture_green);
    excursion();           // G4 screw green
    leg(w.fixture_green);
    excursion();           // G8 gold functioning
    leg(hp_gold);          // receive gold card
    excursion();           // G9 place gold
    leg(w.fixture_gold);
    excursion();           // G5 screw gold
    leg(w.fixture_gold);
    excursion();           // G6 End
}

// Approach-then-hold wrist stream feeding the stillness detector; the still
// segment sits exactly at the neutral point so the bookkeeping stays exact.
std::vector<SkeletonFrame> handover_wrist_stream(const Vec3& neutral,
                                                 const StillnessConfig& stillness) {
    std::vector<SkeletonFrame> stream;
    const double fps = 30.0;
    const Vec3 start = neutral + Vec3{-24.0, 0.0, 0.0};
    const std::size_t approach = 12;
    for (std::size_t i = 0; i < approach; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(approach);
        SkeletonFrame f;
        f.timestamp = static_cast<double>(i) / fps;
        f.wrist_position = start + (neutral - start) * frac;
        stream.push_back(f);
    }
    for (std::size_t i = 0; i < stillness.hold_frames + 10; ++i) {
        SkeletonFrame f;
        f.timestamp = static_cast<double>(approach + i) / fps;
        f.wrist_position = neutral;
        stream.push_back(f);
    }
    return stream;
}

struct CommandOutcome {
    std::vector<ConfirmedCommand> commands;
    bool truncated = false;
};

// Baseline mode: commands arrive from physical panel interactions.
CommandOutcome panel_commands(std::size_t repetitions) {
    CommandOutcome out;
    std::size_t index = 0;
    for (std::size_t rep = 0; rep < repetitions; ++rep)
        for (const auto& cmd : routine_script())
            out.commands.push_back({index++, cmd});
    return out;
}

// Gesture modes: every gesture becomes 25 recognized frames plus 10 frames of
// waiting-posture filler, shipped as datagrams through the transport stack and
// the debounce filter. The press stays a direct event.
CommandOutcome gesture_commands(std::size_t repetitions, std::size_t frame_budget) {
    CommandOutcome out;
    GestureStreamReceiver receiver;
    GestureDebouncer filter;
    std::size_t frame = 1;  // datagram frame indices, strictly increasing

    auto send_frames = [&](Gesture g, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            if (frame > frame_budget) {
                out.truncated = true;
                return;
            }
            const std::string payload = std::to_string(frame) + " " +
                                        std::to_string(static_cast<int>(g)) + "\n";
            const auto event = receiver.receive(
                payload, static_cast<double>(frame) / kDefaultFrameRate);
            ++frame;
            if (event)
                if (const auto cmd = filter.feed(*event)) out.commands.push_back(*cmd);
        }
    };

    for (std::size_t rep = 0; rep < repetitions && !out.truncated; ++rep) {
        for (const auto& cmd : routine_script()) {
            if (out.truncated) break;
            if (std::holds_alternative<ForcePress>(cmd)) {
                out.commands.push_back({frame, cmd});
                continue;
            }
            send_frames(std::get<Gesture>(cmd), 25);
            send_frames(Gesture::Waiting, 10);
        }
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::vector<SyntheticOperatorProfile>& profiles) {
    config.validate();
    if (profiles.empty()) throw ValidationError("no operator profiles");

    ExperimentResult result;
    result.mode = config.mode;

    for (const auto& profile : profiles) {
        profile.validate();
        const Waypoints w = operator_waypoints(profile);
        const double half_exc = 0.5 * config.excursion_cm * profile.scale;

        OperatorRunResult run;
        run.operator_id = profile.operator_id;

        // Handover position for this mode; adaptation runs the wrist stream
        // through the stillness detector first, like the live pipeline.
        Vec3 hp = config.geometry.default_handover;
        bool adapted = false;
        if (config.mode == ExperimentMode::GrPlusSa) {
            const StillnessConfig stillness;
            const auto stream =
                derive_velocities(handover_wrist_stream(w.neutral, stillness));
            const auto intervals = detect_stillness(stream, stillness);
            if (!intervals.empty()) {
                const Vec3 wrist =
                    stream[intervals.front().start_frame].wrist_position;
                const auto [ahp, did] =
                    adapted_handover(wrist, config.geometry, true);
                hp = ahp;
                adapted = did;
            }
        }
        run.adapted = adapted;

        for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
            run.handovers.push_back({config.geometry.waiting_point,
                                     config.geometry.default_handover, hp});
            run.handovers.push_back({config.geometry.waiting_point,
                                     config.geometry.default_handover, hp});
        }

        // Wrist paths: this mode plus the fixed baseline for RiOM.
        std::vector<Vec3> path{w.neutral};
        std::vector<Vec3> baseline{w.neutral};
        for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
            append_routine_path(path, w, hp, hp,
                                config.mode == ExperimentMode::NoGrNoSa, half_exc);
            append_routine_path(baseline, w, config.geometry.default_handover,
                                config.geometry.default_handover, true, half_exc);
        }
        run.path = make_motion_record(std::move(path));
        run.baseline_path = make_motion_record(std::move(baseline));

        const CommandOutcome outcome = config.mode == ExperimentMode::NoGrNoSa
                                           ? panel_commands(config.repetitions)
                                           : gesture_commands(config.repetitions,
                                                              config.frame_budget);
        run.trace = run_routine(config.workflow, outcome.commands);
        run.completed = run.trace.completed && !outcome.truncated;

        double sa_sum = 0.0;
        for (const auto& trial : run.handovers)
            sa_sum += spatial_adaptation_kpi(trial);
        run.kpi.operator_id = profile.operator_id;
        run.kpi.sa_percent = sa_sum / static_cast<double>(run.handovers.size());
        run.kpi.riom_percent = riom_kpi(run.baseline_path, run.path);

        result.runs.push_back(std::move(run));
    }
    return result;
}

ThreeExperimentReport run_three_experiments(
    const ExperimentConfig& base,
    const std::vector<SyntheticOperatorProfile>& profiles) {
    ThreeExperimentReport report;
    ExperimentConfig config = base;

    config.mode = ExperimentMode::NoGrNoSa;
    report.baseline = run_experiment(config, profiles);
    config.mode = ExperimentMode::GrOnly;
    report.gr_only = run_experiment(config, profiles);
    config.mode = ExperimentMode::GrPlusSa;
    report.gr_plus_sa = run_experiment(config, profiles);

    for (std::size_t i = 0; i < profiles.size(); ++i) {
        KpiRecord record;
        record.operator_id = profiles[i].operator_id;
        record.sa_percent = report.gr_plus_sa.runs[i].kpi.sa_percent;
        record.riom_percent = report.gr_only.runs[i].kpi.riom_percent;
        report.combined.push_back(std::move(record));
    }
    return report;
}

}  // namespace ergohrc
