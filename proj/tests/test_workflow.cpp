#include <random>
#include <sstream>

#include "doctest.h"
#include "ergohrc/errors.hpp"
#include "ergohrc/workflow.hpp"

using namespace ergohrc;

namespace {

std::vector<GestureFrameEvent> frames_of(const std::vector<int>& gesture_ids) {
    std::vector<GestureFrameEvent> events;
    for (std::size_t i = 0; i < gesture_ids.size(); ++i)
        events.push_back({i + 1, gesture_from_id(gesture_ids[i]), (i + 1) / 90.0});
    return events;
}

std::vector<int> repeated(int id, std::size_t count) {
    return std::vector<int>(count, id);
}

// Independent oracle for the consecutive-frame rule with post-emission reset.
std::vector<std::size_t> naive_debounce_positions(const std::vector<int>& ids,
                                                  std::size_t run_length) {
    std::vector<std::size_t> emit_positions;
    std::size_t run = 0;
    int current = -1;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (run > 0 && ids[i] == current) {
            ++run;
        } else {
            current = ids[i];
            run = 1;
        }
        if (run == run_length) {
            emit_positions.push_back(i);
            run = 0;
        }
    }
    return emit_positions;
}

std::vector<ConfirmedCommand> commands_of(const std::vector<Command>& commands) {
    std::vector<ConfirmedCommand> out;
    for (std::size_t i = 0; i < commands.size(); ++i)
        out.push_back({i, commands[i]});
    return out;
}

const std::vector<Command>& happy_path() {
    static const std::vector<Command> path = {
        Command{Gesture::Start},          Command{ForcePress{}},
        Command{Gesture::GreenFunctioning}, Command{Gesture::PlaceGreenCard},
        Command{Gesture::ScrewGreenCard},  Command{Gesture::GoldFunctioning},
        Command{Gesture::PlaceGoldCard},   Command{Gesture::ScrewGoldCard},
        Command{Gesture::End},
    };
    return path;
}

}  // namespace

TEST_CASE("gesture ids map to G1..G11 and reject the rest") {
    CHECK(gesture_from_id(1) == Gesture::Start);
    CHECK(gesture_from_id(7) == Gesture::Waiting);
    CHECK(gesture_from_id(11) == Gesture::GoldNotFunctioning);
    CHECK(gesture_name(Gesture::GoldFunctioning) == "G8");
    CHECK_THROWS_AS(gesture_from_id(0), ValidationError);
    CHECK_THROWS_AS(gesture_from_id(12), ValidationError);
}

TEST_CASE("twenty identical frames confirm one command") {
    const auto confirmed = debounce(frames_of(repeated(1, 20)));
    REQUIRE(confirmed.size() == 1);
    CHECK(confirmed[0].frame_index == 20);  // frames numbered 1..20
    CHECK(std::get<Gesture>(confirmed[0].command) == Gesture::Start);
}

TEST_CASE("an interrupted run never confirms") {
    auto ids = repeated(1, 19);
    ids.push_back(7);
    auto tail = repeated(1, 19);
    ids.insert(ids.end(), tail.begin(), tail.end());
    CHECK(debounce(frames_of(ids)).empty());
}

TEST_CASE("a forty-frame run confirms twice") {
    const auto confirmed = debounce(frames_of(repeated(3, 40)));
    REQUIRE(confirmed.size() == 2);
    CHECK(confirmed[0].frame_index == 20);
    CHECK(confirmed[1].frame_index == 40);
}

TEST_CASE("debounce matches the naive oracle on random streams") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> id(1, 11);
    std::uniform_int_distribution<std::size_t> length(1, 300);
    for (int round = 0; round < 500; ++round) {
        std::vector<int> ids;
        // Bias toward repeats so runs actually form.
        int current = id(rng);
        const std::size_t n = length(rng);
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 100 < 12) current = id(rng);
            ids.push_back(current);
        }
        const auto confirmed = debounce(frames_of(ids));
        const auto expected = naive_debounce_positions(ids, kDebounceRunLength);
        REQUIRE(confirmed.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(confirmed[i].frame_index == expected[i] + 1);
            CHECK(std::get<Gesture>(confirmed[i].command) ==
                  gesture_from_id(ids[expected[i]]));
        }
    }
}

TEST_CASE("run length one confirms every frame") {
    const auto confirmed = debounce(frames_of({5, 5, 6}), 1);
    CHECK(confirmed.size() == 3);
}

TEST_CASE("step follows the definition and rejects the rest") {
    const auto wf = tv_assembly_workflow();

    const auto start = step(wf, WorkflowState::Idle, Command{Gesture::Start});
    CHECK(start.accepted);
    CHECK(start.state == WorkflowState::FetchGreen);
    REQUIRE(start.action.has_value());
    CHECK(start.action->kind == RobotAction::Kind::FetchCard);
    CHECK(start.action->card == Card::Green);

    const auto rejected =
        step(wf, WorkflowState::HandoverGreen, Command{Gesture::ScrewGreenCard});
    CHECK(!rejected.accepted);
    CHECK(rejected.state == WorkflowState::HandoverGreen);
    CHECK(!rejected.action.has_value());

    const auto replace = step(wf, WorkflowState::AwaitGreenVerify,
                              Command{Gesture::GreenNotFunctioning});
    CHECK(replace.accepted);
    CHECK(replace.state == WorkflowState::FetchGreen);
    REQUIRE(replace.action.has_value());
    CHECK(replace.action->kind == RobotAction::Kind::FetchCard);
}

TEST_CASE("the scripted happy path reaches Done") {
    const auto trace = run_routine(tv_assembly_workflow(), commands_of(happy_path()));
    CHECK(trace.completed);
    CHECK(trace.final_state == WorkflowState::Done);
    for (const auto& step : trace.steps) CHECK(step.accepted);
}

TEST_CASE("partial and invalid streams do not complete") {
    const auto wf = tv_assembly_workflow();

    auto partial = happy_path();
    partial.resize(4);
    const auto trace = run_routine(wf, commands_of(partial));
    CHECK(!trace.completed);
    CHECK(trace.steps.size() == 4);

    const auto stuck = run_routine(
        wf, commands_of({Command{Gesture::End}, Command{Gesture::GoldFunctioning}}));
    CHECK(!stuck.completed);
    CHECK(stuck.final_state == WorkflowState::Idle);
    for (const auto& step : stuck.steps) CHECK(!step.accepted);
}

TEST_CASE("replacement branches add exactly one extra fetch") {
    auto count_fetches = [](const RoutineTrace& trace) {
        std::size_t n = 0;
        for (const auto& step : trace.steps)
            if (step.action && step.action->kind == RobotAction::Kind::FetchCard) ++n;
        return n;
    };
    const auto wf = tv_assembly_workflow();
    const auto base = run_routine(wf, commands_of(happy_path()));
    REQUIRE(count_fetches(base) == 2);

    // Green card fails once: G10 orders a replacement.
    std::vector<Command> green_retry = {
        Command{Gesture::Start},           Command{ForcePress{}},
        Command{Gesture::GreenNotFunctioning}, Command{ForcePress{}},
        Command{Gesture::GreenFunctioning}, Command{Gesture::PlaceGreenCard},
        Command{Gesture::ScrewGreenCard},  Command{Gesture::GoldFunctioning},
        Command{Gesture::PlaceGoldCard},   Command{Gesture::ScrewGoldCard},
        Command{Gesture::End},
    };
    const auto green_trace = run_routine(wf, commands_of(green_retry));
    CHECK(green_trace.completed);
    CHECK(count_fetches(green_trace) == 3);

    // Gold card fails once: G11 orders a replacement.
    std::vector<Command> gold_retry = {
        Command{Gesture::Start},          Command{ForcePress{}},
        Command{Gesture::GreenFunctioning}, Command{Gesture::PlaceGreenCard},
        Command{Gesture::ScrewGreenCard},  Command{ForcePress{}},
        Command{Gesture::GoldNotFunctioning}, Command{ForcePress{}},
        Command{Gesture::GoldFunctioning}, Command{Gesture::PlaceGoldCard},
        Command{Gesture::ScrewGoldCard},   Command{Gesture::End},
    };
    const auto gold_trace = run_routine(wf, commands_of(gold_retry));
    CHECK(gold_trace.completed);
    CHECK(count_fetches(gold_trace) == 3);
}

TEST_CASE("definition validation") {
    SUBCASE("Done may not have outgoing transitions") {
        CHECK_THROWS_AS(
            WorkflowDefinition({{WorkflowState::Done, Command{Gesture::Start},
                                 WorkflowState::Idle, std::nullopt}}),
            ValidationError);
    }
    SUBCASE("duplicate triggers rejected") {
        TransitionRule rule{WorkflowState::Idle, Command{Gesture::Start},
                            WorkflowState::FetchGreen, std::nullopt};
        CHECK_THROWS_AS(WorkflowDefinition({rule, rule}), ValidationError);
    }
    SUBCASE("fetch_card needs a card") {
        CHECK_THROWS_AS(
            WorkflowDefinition(
                {{WorkflowState::Idle, Command{Gesture::Start},
                  WorkflowState::FetchGreen,
                  RobotAction{RobotAction::Kind::FetchCard, std::nullopt}}}),
            ValidationError);
    }
}

TEST_CASE("workflow definition file round trip") {
    const auto wf = tv_assembly_workflow();
    std::stringstream buffer;
    save_workflow(wf, buffer);
    const auto back = load_workflow(buffer);
    REQUIRE(back.rules().size() == wf.rules().size());
    for (std::size_t i = 0; i < wf.rules().size(); ++i) {
        CHECK(back.rules()[i].from == wf.rules()[i].from);
        CHECK(back.rules()[i].to == wf.rules()[i].to);
        CHECK(command_name(back.rules()[i].trigger) ==
              command_name(wf.rules()[i].trigger));
        CHECK(back.rules()[i].action == wf.rules()[i].action);
    }
}

TEST_CASE("shipped workflow file matches the builtin definition") {
    const auto shipped =
        load_workflow_file(std::string(TEST_DATA_DIR) + "/workflow.txt");
    std::stringstream a, b;
    save_workflow(shipped, a);
    save_workflow(tv_assembly_workflow(), b);
    CHECK(a.str() == b.str());
}

TEST_CASE("trace CSV layout") {
    const auto trace =
        run_routine(tv_assembly_workflow(), commands_of({Command{Gesture::Start}}));
    std::stringstream out;
    write_trace_csv(trace, out);
    CHECK(out.str() ==
          "event_index,state_before,command,accepted,action,state_after\n"
          "0,Idle,G1,yes,fetch_card(green),FetchGreen\n");
}
