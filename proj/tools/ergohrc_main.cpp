// Command-line front end: train models, score recordings, build delegation
// plans, run the simulated three-experiment protocol, compute KPI tables, and
// listen for live gesture datagrams.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ergohrc/errors.hpp"
#include "ergohrc/ergo.hpp"
#include "ergohrc/kpi.hpp"
#include "ergohrc/recognition.hpp"
#include "ergohrc/sim.hpp"
#include "ergohrc/transport.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ergohrc;

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    return out;
}

PrimitiveCatalog catalog_from(const std::string& path) {
    return path.empty() ? default_catalog() : load_catalog_file(path);
}

SyntheticOperatorProfile training_profile(std::uint64_t seed) {
    SyntheticOperatorProfile profile;
    profile.operator_id = "trainer";
    profile.seed = derive_seed(seed, "training");
    return profile;
}

int run_train(const std::string& catalog_path, const std::string& out_dir,
              std::uint64_t seed, std::size_t states, std::size_t replicates,
              double window_seconds) {
    const auto catalog = catalog_from(catalog_path);
    const auto profile = training_profile(seed);
    fs::create_directories(out_dir);

    std::vector<GaussianHmm> models;
    for (const auto& entry : catalog.entries()) {
        std::vector<FeatureSequence> sequences;
        for (std::size_t r = 0; r < replicates; ++r)
            sequences.push_back(clip_features(synthesize_primitive_clip(
                entry, profile, window_seconds, kDefaultFrameRate, r)));
        TrainStats stats;
        models.push_back(train_primitive_model(sequences, states, {}, &stats));
        std::cout << "trained " << entry.name << ": " << stats.iterations
                  << " iterations, log-likelihood "
                  << stats.log_likelihoods.back() << "\n";
    }
    save_classifier(PrimitiveClassifier(std::move(models)),
                    (fs::path(out_dir) / "models").string());
    save_catalog_file(catalog, (fs::path(out_dir) / "catalog.txt").string());
    std::cout << "wrote models to " << out_dir << "/models\n";
    return 0;
}

int run_score(const std::string& catalog_path, const std::string& models_dir,
              const std::vector<std::string>& clip_paths, bool synth,
              const std::string& out_dir, std::uint64_t seed, double low_max,
              double medium_max, double window_seconds) {
    const auto catalog = catalog_from(catalog_path);
    const auto classifier = load_classifier(models_dir);
    const RiskThresholds thresholds{low_max, medium_max};
    fs::create_directories(out_dir);

    // Task recordings come either from files (label = task id) or from the
    // synthetic default task specs.
    std::vector<std::pair<std::string, MotionClip>> tasks;
    for (const auto& path : clip_paths) {
        MotionClip clip = ingest_clip_file(path);
        const std::string task_id =
            clip.label.value_or(fs::path(path).stem().string());
        tasks.emplace_back(task_id, std::move(clip));
    }
    if (synth) {
        const auto profile = training_profile(derive_seed(seed, "score"));
        for (const auto& [task_id, ids] : default_task_specs())
            tasks.emplace_back(task_id, synthesize_task_recording(
                                            ids, profile, catalog, window_seconds));
    }
    if (tasks.empty())
        throw ValidationError("no task recordings: pass clip files or --synth");

    std::vector<TaskScoreSummary> summaries;
    for (const auto& [task_id, clip] : tasks) {
        SegmentationConfig seg;
        seg.window_seconds = window_seconds;
        const auto detections = classifier.detect(clip, seg);
        auto detections_out = open_out(fs::path(out_dir) /
                                       ("detections_" + task_id + ".csv"));
        write_detections_csv(detections, detections_out);
        summaries.push_back(summarize_task(score_detections(detections, catalog),
                                           task_id, thresholds));
    }

    auto summary_out = open_out(fs::path(out_dir) / "summary.csv");
    write_summary_csv(summaries, summary_out);
    write_summary_csv(summaries, std::cout);
    std::cout << "wrote " << out_dir << "/summary.csv\n";
    return 0;
}

int run_delegate(const std::string& summary_path, const std::string& out_dir) {
    std::ifstream in(summary_path);
    if (!in) throw ValidationError("cannot open '" + summary_path + "'");
    const auto summaries = load_summary_csv(in);
    const auto plan = build_delegation(summaries);
    fs::create_directories(out_dir);

    auto csv = open_out(fs::path(out_dir) / "delegation.csv");
    write_delegation_csv(plan, csv);
    auto txt = open_out(fs::path(out_dir) / "delegation.txt");
    write_delegation_report(plan, txt);
    write_delegation_report(plan, std::cout);
    return 0;
}

int run_simulate(const std::string& out_dir, std::uint64_t seed,
                 std::size_t operators, std::size_t repetitions,
                 double excursion_cm) {
    ExperimentConfig config;
    config.repetitions = repetitions;
    config.excursion_cm = excursion_cm;
    const auto profiles = make_operator_profiles(seed, operators);
    const auto report = run_three_experiments(config, profiles);
    fs::create_directories(out_dir);

    auto kpi_out = open_out(fs::path(out_dir) / "kpi.csv");
    write_kpi_csv(report.combined, kpi_out);
    write_kpi_csv(report.combined, std::cout);

    for (const ExperimentResult* result :
         {&report.baseline, &report.gr_only, &report.gr_plus_sa}) {
        const fs::path dir =
            fs::path(out_dir) / ("traces_" + experiment_mode_name(result->mode));
        fs::create_directories(dir);
        for (const auto& run : result->runs) {
            auto trace_out = open_out(dir / (run.operator_id + ".csv"));
            write_trace_csv(run.trace, trace_out);
            if (!run.completed)
                std::cerr << "warning: " << experiment_mode_name(result->mode) << " "
                          << run.operator_id << " did not complete\n";
        }
    }
    std::cout << "wrote " << out_dir << "/kpi.csv and per-mode traces\n";
    return 0;
}

// Input rows: operator handover geometry plus the two motion magnitudes.
std::vector<KpiRecord> load_trials_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty trials CSV");
    const std::string expected =
        "operator_id,wp_x,wp_y,wp_z,php_x,php_y,php_z,ahp_x,ahp_y,ahp_z,"
        "magnitude_without_gr,magnitude_with_gr";
    if (line != expected)
        throw ParseError("unexpected trials CSV header, want: " + expected, 1);

    std::vector<KpiRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> nums;
        std::string id;
        std::size_t field = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i != line.size() && line[i] != ',') continue;
            const std::string tok = line.substr(start, i - start);
            if (field == 0) {
                id = tok;
            } else {
                try {
                    nums.push_back(std::stod(tok));
                } catch (const std::exception&) {
                    throw ParseError("bad number '" + tok + "'", line_no);
                }
            }
            ++field;
            start = i + 1;
        }
        if (nums.size() != 11) throw ParseError("expected 12 fields", line_no);
        HandoverTrial trial{{nums[0], nums[1], nums[2]},
                            {nums[3], nums[4], nums[5]},
                            {nums[6], nums[7], nums[8]}};
        MotionRecord without_gr;
        without_gr.magnitude = nums[9];
        MotionRecord with_gr;
        with_gr.magnitude = nums[10];
        records.push_back(
            {id, spatial_adaptation_kpi(trial), riom_kpi(without_gr, with_gr)});
    }
    return records;
}

int run_kpi(const std::string& trials_path, const std::string& out_dir) {
    const auto records = load_trials_csv(trials_path);
    if (records.empty()) throw ValidationError("trials CSV has no rows");
    fs::create_directories(out_dir);
    auto out = open_out(fs::path(out_dir) / "kpi.csv");
    write_kpi_csv(records, out);
    write_kpi_csv(records, std::cout);
    return 0;
}

int run_listen(const std::string& bind_address, std::uint16_t port,
               double max_seconds) {
    UdpGestureListener listener(bind_address, port);
    std::cout << "listening on " << bind_address << ":" << listener.port() << "\n";

    const auto workflow = tv_assembly_workflow();
    GestureDebouncer filter;
    WorkflowState state = WorkflowState::Idle;
    double waited = 0.0;

    while (state != WorkflowState::Done) {
        const int slice_ms = 200;
        const auto event = listener.poll_event(slice_ms);
        if (!event) {
            waited += slice_ms / 1000.0;
            if (max_seconds > 0.0 && waited >= max_seconds) break;
            continue;
        }
        waited = 0.0;
        const auto command = filter.feed(*event);
        if (!command) continue;
        const auto result = step(workflow, state, command->command);
        std::cout << "frame " << command->frame_index << " "
                  << command_name(command->command) << ": "
                  << (result.accepted ? "accepted" : "rejected") << ", "
                  << state_name(state) << " -> " << state_name(result.state);
        if (result.action) std::cout << " [" << action_name(*result.action) << "]";
        std::cout << "\n";
        state = result.state;
    }

    const auto& c = listener.counters();
    std::cout << "datagrams: " << c.accepted << " accepted, " << c.malformed
              << " malformed, " << c.out_of_range << " out of range, "
              << c.out_of_order << " out of order\n";
    std::cout << "final state: " << state_name(state) << "\n";
    return state == WorkflowState::Done ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ergonomic human-robot collaboration pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file");

    std::uint64_t seed = 2024;
    std::string out_dir = "out";
    app.add_option("--seed", seed, "root random seed")->capture_default_str();
    app.add_option("--out", out_dir, "output directory")->capture_default_str();

    std::string catalog_path;
    std::string models_dir = "out/models";
    std::size_t states = kDefaultHmmStates;
    std::size_t replicates = 10;
    double window_seconds = kDefaultWindowSeconds;

    auto* train = app.add_subcommand("train", "train one model per primitive");
    train->add_option("--catalog", catalog_path, "catalog file (default builtin)");
    train->add_option("--states", states, "states per model")->capture_default_str();
    train->add_option("--replicates", replicates, "training clips per primitive")
        ->capture_default_str();
    train->add_option("--window-seconds", window_seconds, "clip length in seconds")
        ->capture_default_str();

    std::vector<std::string> clip_paths;
    bool synth = false;
    double low_max = 13.0;
    double medium_max = 22.0;
    auto* score = app.add_subcommand("score", "classify recordings, score tasks");
    score->add_option("--catalog", catalog_path, "catalog file (default builtin)");
    score->add_option("--models", models_dir, "trained model directory")
        ->capture_default_str();
    score->add_option("--clip", clip_paths, "task recording file (repeatable)");
    score->add_flag("--synth", synth, "score synthetic default tasks");
    score->add_option("--low-max", low_max, "Low risk upper bound")
        ->capture_default_str();
    score->add_option("--medium-max", medium_max, "Medium risk upper bound")
        ->capture_default_str();
    score->add_option("--window-seconds", window_seconds, "window length in seconds")
        ->capture_default_str();

    std::string summary_path = "out/summary.csv";
    auto* delegate = app.add_subcommand("delegate", "split tasks human/robot");
    delegate->add_option("--summary", summary_path, "summary CSV from score")
        ->capture_default_str();

    std::size_t operators = 14;
    std::size_t repetitions = 1;
    double excursion_cm = 15.0;
    auto* simulate = app.add_subcommand("simulate", "run the three experiments");
    simulate->add_option("--operators", operators, "synthetic operator count")
        ->capture_default_str();
    simulate->add_option("--reps", repetitions, "routine repetitions")
        ->capture_default_str();
    simulate->add_option("--excursion-cm", excursion_cm,
                         "baseline walk-to-panel path length")
        ->capture_default_str();

    std::string trials_path;
    auto* kpi = app.add_subcommand("kpi", "KPI table from a trials CSV");
    kpi->add_option("--trials", trials_path, "trials CSV")->required();

    std::string bind_address = "127.0.0.1";
    std::uint16_t port = 47810;
    double max_seconds = 0.0;
    auto* listen = app.add_subcommand("listen", "drive the workflow over UDP");
    listen->add_option("--bind", bind_address, "bind address")->capture_default_str();
    listen->add_option("--port", port, "UDP port (0 = ephemeral)")
        ->capture_default_str();
    listen->add_option("--max-seconds", max_seconds,
                       "give up after this much silence (0 = wait forever)")
        ->capture_default_str();

    // Let the global --seed/--out/--config appear after the subcommand name.
    for (auto* sub : {train, score, delegate, simulate, kpi, listen})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed())
            return run_train(catalog_path, out_dir, seed, states, replicates,
                             window_seconds);
        if (score->parsed())
            return run_score(catalog_path, models_dir, clip_paths, synth, out_dir,
                             seed, low_max, medium_max, window_seconds);
        if (delegate->parsed()) return run_delegate(summary_path, out_dir);
        if (simulate->parsed())
            return run_simulate(out_dir, seed, operators, repetitions, excursion_cm);
        if (kpi->parsed()) return run_kpi(trials_path, out_dir);
        if (listen->parsed()) return run_listen(bind_address, port, max_seconds);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
