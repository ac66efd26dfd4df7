#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ergohrc/ergo.hpp"
#include "ergohrc/errors.hpp"
#include "ergohrc/sim.hpp"

using namespace ergohrc;

namespace {

constexpr std::uint64_t kRootSeed = 2024;

bool clips_equal(const MotionClip& a, const MotionClip& b) {
    if (a.frames.size() != b.frames.size()) return false;
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
        if (a.frames[i].angles != b.frames[i].angles) return false;
        if (a.frames[i].timestamp != b.frames[i].timestamp) return false;
    }
    return true;
}

std::string kpi_csv_of(const ExperimentResult& result) {
    std::stringstream out;
    write_kpi_csv(result.kpis(), out);
    return out.str();
}

}  // namespace

TEST_CASE("operator profiles are stable under roster growth") {
    const auto five = make_operator_profiles(kRootSeed, 5);
    const auto fourteen = make_operator_profiles(kRootSeed, 14);
    REQUIRE(five.size() == 5);
    REQUIRE(fourteen.size() == 14);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(five[i].operator_id == fourteen[i].operator_id);
        CHECK(five[i].seed == fourteen[i].seed);
        CHECK(five[i].scale == fourteen[i].scale);
    }
    CHECK(fourteen.front().operator_id == "op01");
    CHECK(fourteen.back().operator_id == "op14");

    std::set<std::uint64_t> seeds;
    for (const auto& p : fourteen) {
        seeds.insert(p.seed);
        CHECK(p.scale >= 0.9);
        CHECK(p.scale <= 1.1);
        p.validate();
    }
    CHECK(seeds.size() == 14);
    CHECK_THROWS_AS(make_operator_profiles(kRootSeed, 0), ValidationError);
}

TEST_CASE("seed derivation separates labels") {
    CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
    CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
    CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
}

TEST_CASE("a noiseless clip is the exact keyframe interpolation") {
    const auto catalog = default_catalog();
    const auto& entry = catalog.entry(0);
    REQUIRE(entry.keyframes.size() == 2);

    SyntheticOperatorProfile quiet;
    quiet.operator_id = "probe";
    quiet.angle_noise = 0.0;
    quiet.seed = 99;

    const double rate = 90.0;
    const auto clip = synthesize_primitive_clip(entry, quiet, 10.0 / rate, rate);
    REQUIRE(clip.frames.size() == 10);
    CHECK(clip.label == entry.name);
    CHECK(clip.frames.front().angles == entry.keyframes.front());
    CHECK(clip.frames.back().angles == entry.keyframes.back());
    for (std::size_t t = 0; t < 10; ++t) {
        const double u = static_cast<double>(t) / 9.0;
        for (std::size_t d = 0; d < entry.keyframes[0].size(); ++d) {
            const double expected =
                (1.0 - u) * entry.keyframes[0][d] + u * entry.keyframes[1][d];
            CHECK(clip.frames[t].angles[d] ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("clip synthesis is deterministic per (profile, salt)") {
    const auto catalog = default_catalog();
    const auto& entry = catalog.entry(3);
    const auto profiles = make_operator_profiles(kRootSeed, 1);

    const auto a = synthesize_primitive_clip(entry, profiles[0], 1.0);
    const auto b = synthesize_primitive_clip(entry, profiles[0], 1.0);
    CHECK(clips_equal(a, b));

    const auto other_salt = synthesize_primitive_clip(entry, profiles[0], 1.0, 90.0, 1);
    CHECK(!clips_equal(a, other_salt));
}

TEST_CASE("clip synthesis rejects degenerate requests") {
    const auto catalog = default_catalog();
    const auto profiles = make_operator_profiles(kRootSeed, 1);
    CHECK_THROWS_AS(
        synthesize_primitive_clip(catalog.entry(0), profiles[0], 0.01),
        ValidationError);
}

TEST_CASE("task recordings concatenate one window per primitive") {
    const auto catalog = default_catalog();
    const auto profiles = make_operator_profiles(kRootSeed, 1);
    const auto task = synthesize_task_recording({9, 9, 3}, profiles[0], catalog);
    CHECK(task.frames.size() == 1350);
    CHECK(task.label == "task");
    CHECK(task.channels.size() == 5);
    for (std::size_t i = 1; i < task.frames.size(); ++i)
        CHECK(task.frames[i].timestamp > task.frames[i - 1].timestamp);

    CHECK_THROWS_AS(synthesize_task_recording({}, profiles[0], catalog),
                    ValidationError);
    CHECK_THROWS_AS(synthesize_task_recording({99}, profiles[0], catalog),
                    ValidationError);
}

TEST_CASE("shipped task specs split cleanly across the risk bands") {
    const auto catalog = default_catalog();
    const auto specs = default_task_specs();
    REQUIRE(specs.size() == 4);

    // Each spec repeats one primitive, so that primitive's score is the mode.
    const double t1 = catalog.entry(specs[0].second[0]).eaws_score;
    const double t2 = catalog.entry(specs[1].second[0]).eaws_score;
    const double t3 = catalog.entry(specs[2].second[0]).eaws_score;
    const double t4 = catalog.entry(specs[3].second[0]).eaws_score;
    CHECK(t1 == 17.5);
    CHECK(t2 == 16.0);
    CHECK(t3 == 8.5);
    CHECK(t4 == 12.5);
    CHECK(classify_risk(t1) == RiskClass::Medium);
    CHECK(classify_risk(t2) == RiskClass::Medium);
    CHECK(classify_risk(t3) == RiskClass::Low);
    CHECK(classify_risk(t4) == RiskClass::Low);
}

TEST_CASE("the baseline experiment has no adaptation and no motion savings") {
    ExperimentConfig config;
    config.mode = ExperimentMode::NoGrNoSa;
    const auto profiles = make_operator_profiles(kRootSeed, 3);
    const auto result = run_experiment(config, profiles);
    REQUIRE(result.runs.size() == 3);
    for (const auto& run : result.runs) {
        CHECK(run.completed);
        CHECK(!run.adapted);
        CHECK(run.kpi.sa_percent == 0.0);
        CHECK(run.kpi.riom_percent == 0.0);
        CHECK(run.path.magnitude == run.baseline_path.magnitude);
        REQUIRE(run.handovers.size() == 2);
    }
}

TEST_CASE("gesture recognition removes the panel excursions") {
    ExperimentConfig config;
    config.mode = ExperimentMode::GrOnly;
    config.repetitions = 2;
    const auto profiles = make_operator_profiles(kRootSeed, 3);
    const auto result = run_experiment(config, profiles);
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const auto& run = result.runs[i];
        CHECK(run.completed);
        CHECK(!run.adapted);
        CHECK(run.kpi.sa_percent == 0.0);
        CHECK(run.kpi.riom_percent > 0.0);

        // Every gesture command stands for one dropped out-and-back excursion,
        // so the saved length is known in closed form.
        const double half = 0.5 * config.excursion_cm * profiles[i].scale;
        const double saved = 16.0 * static_cast<double>(config.repetitions) * half;
        const double expected = 100.0 * saved / (run.path.magnitude + saved);
        CHECK(std::abs(run.kpi.riom_percent - expected) <= 1e-9 * expected);
    }
}

TEST_CASE("spatial adaptation moves the handover and reports positive SA") {
    ExperimentConfig config;
    config.mode = ExperimentMode::GrPlusSa;
    const auto profiles = make_operator_profiles(kRootSeed, 14);
    const auto result = run_experiment(config, profiles);
    for (const auto& run : result.runs) {
        CHECK(run.completed);
        CHECK(run.adapted);
        CHECK(run.kpi.sa_percent > 0.0);
        CHECK(run.kpi.riom_percent > 0.0);

        double sa_sum = 0.0;
        for (const auto& trial : run.handovers)
            sa_sum += spatial_adaptation_kpi(trial);
        CHECK(run.kpi.sa_percent ==
              doctest::Approx(sa_sum / run.handovers.size()).epsilon(1e-12));
    }
}

TEST_CASE("experiments are bitwise repeatable") {
    ExperimentConfig config;
    config.mode = ExperimentMode::GrPlusSa;
    const auto profiles = make_operator_profiles(kRootSeed, 2);
    const auto first = run_experiment(config, profiles);
    const auto second = run_experiment(config, profiles);
    CHECK(kpi_csv_of(first) == kpi_csv_of(second));
}

TEST_CASE("a tiny frame budget truncates the routine without failing hard") {
    ExperimentConfig config;
    config.mode = ExperimentMode::GrOnly;
    config.frame_budget = 50;
    const auto profiles = make_operator_profiles(kRootSeed, 1);
    const auto result = run_experiment(config, profiles);
    REQUIRE(result.runs.size() == 1);
    CHECK(!result.runs[0].completed);
    CHECK(!result.runs[0].trace.completed);
}

TEST_CASE("experiment config validation") {
    ExperimentConfig config;
    config.repetitions = 0;
    CHECK_THROWS_AS(config.validate(), ValidationError);
    config.repetitions = 1;
    config.excursion_cm = 0.0;
    CHECK_THROWS_AS(config.validate(), ValidationError);
}

TEST_CASE("the combined report pairs SA and RiOM from the right runs") {
    ExperimentConfig config;
    const auto profiles = make_operator_profiles(kRootSeed, 3);
    const auto report = run_three_experiments(config, profiles);
    REQUIRE(report.combined.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(report.combined[i].operator_id == profiles[i].operator_id);
        CHECK(report.combined[i].sa_percent ==
              report.gr_plus_sa.runs[i].kpi.sa_percent);
        CHECK(report.combined[i].riom_percent ==
              report.gr_only.runs[i].kpi.riom_percent);
        CHECK(report.baseline.runs[i].kpi.sa_percent == 0.0);
        CHECK(report.combined[i].sa_percent > 0.0);
        CHECK(report.combined[i].riom_percent > 0.0);
    }
}
