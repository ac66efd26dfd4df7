#include "ergohrc/workflow.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include "ergohrc/errors.hpp"
#include "text_util.hpp"

namespace ergohrc {

Gesture gesture_from_id(int id) {
    if (id < kMinGestureId || id > kMaxGestureId)
        throw ValidationError("gesture id " + std::to_string(id) +
                              " outside 1..11");
    return static_cast<Gesture>(id);
}

std::string gesture_name(Gesture g) {
    return "G" + std::to_string(static_cast<int>(g));
}

std::string command_name(const Command& c) {
    if (std::holds_alternative<ForcePress>(c)) return "press";
    return gesture_name(std::get<Gesture>(c));
}

Command parse_command(const std::string& name) {
    if (name == "press") return ForcePress{};
    if (name.size() >= 2 && name.front() == 'G') {
        const auto id = detail::parse_int(std::string_view(name).substr(1));
        if (id) return gesture_from_id(static_cast<int>(*id));
    }
    throw ValidationError("unknown command '" + name + "'");
}

namespace {

bool same_command(const Command& a, const Command& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<ForcePress>(a)) return true;
    return std::get<Gesture>(a) == std::get<Gesture>(b);
}

}  // namespace

std::vector<ConfirmedCommand> debounce(const std::vector<GestureFrameEvent>& stream,
                                       std::size_t run_length) {
    GestureDebouncer filter(run_length);
    std::vector<ConfirmedCommand> confirmed;
    for (const auto& event : stream)
        if (const auto cmd = filter.feed(event)) confirmed.push_back(*cmd);
    return confirmed;
}

GestureDebouncer::GestureDebouncer(std::size_t run_length)
    : run_length_(run_length) {
    if (run_length_ == 0) throw ValidationError("debounce run length must be >= 1");
}

std::optional<ConfirmedCommand> GestureDebouncer::feed(
    const GestureFrameEvent& event) {
    if (count_ > 0 && event.gesture == current_) {
        ++count_;
    } else {
        current_ = event.gesture;
        count_ = 1;
    }
    if (count_ == run_length_) {
        count_ = 0;  // a held gesture must earn a full new run to fire again
        return ConfirmedCommand{event.frame_index, Command{event.gesture}};
    }
    return std::nullopt;
}

void GestureDebouncer::reset() { count_ = 0; }

namespace {

constexpr std::array<WorkflowState, 10> kAllStates = {
    WorkflowState::Idle,          WorkflowState::FetchGreen,
    WorkflowState::HandoverGreen, WorkflowState::AwaitGreenVerify,
    WorkflowState::PlaceGreen,    WorkflowState::FetchGold,
    WorkflowState::HandoverGold,  WorkflowState::AwaitGoldVerify,
    WorkflowState::PlaceGold,     WorkflowState::Done,
};

}  // namespace

std::string state_name(WorkflowState s) {
    switch (s) {
        case WorkflowState::Idle: return "Idle";
        case WorkflowState::FetchGreen: return "FetchGreen";
        case WorkflowState::HandoverGreen: return "HandoverGreen";
        case WorkflowState::AwaitGreenVerify: return "AwaitGreenVerify";
        case WorkflowState::PlaceGreen: return "PlaceGreen";
        case WorkflowState::FetchGold: return "FetchGold";
        case WorkflowState::HandoverGold: return "HandoverGold";
        case WorkflowState::AwaitGoldVerify: return "AwaitGoldVerify";
        case WorkflowState::PlaceGold: return "PlaceGold";
        case WorkflowState::Done: return "Done";
    }
    throw ValidationError("bad workflow state value");
}

WorkflowState parse_state(const std::string& name) {
    for (const auto s : kAllStates)
        if (state_name(s) == name) return s;
    throw ValidationError("unknown workflow state '" + name + "'");
}

std::string action_name(const RobotAction& a) {
    switch (a.kind) {
        case RobotAction::Kind::FetchCard:
            return a.card == Card::Gold ? "fetch_card(gold)" : "fetch_card(green)";
        case RobotAction::Kind::MoveToHandover: return "move_to_handover";
        case RobotAction::Kind::ReleaseCard: return "release_card";
        case RobotAction::Kind::ReturnToWait: return "return_to_wait";
        case RobotAction::Kind::Halt: return "halt";
    }
    throw ValidationError("bad robot action value");
}

RobotAction parse_action(const std::string& name) {
    if (name == "fetch_card(green)")
        return {RobotAction::Kind::FetchCard, Card::Green};
    if (name == "fetch_card(gold)")
        return {RobotAction::Kind::FetchCard, Card::Gold};
    if (name == "move_to_handover") return {RobotAction::Kind::MoveToHandover, {}};
    if (name == "release_card") return {RobotAction::Kind::ReleaseCard, {}};
    if (name == "return_to_wait") return {RobotAction::Kind::ReturnToWait, {}};
    if (name == "halt") return {RobotAction::Kind::Halt, {}};
    throw ValidationError("unknown robot action '" + name + "'");
}

WorkflowDefinition::WorkflowDefinition(std::vector<TransitionRule> rules)
    : rules_(std::move(rules)) {
    if (rules_.empty()) throw ValidationError("workflow has no transitions");
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const auto& r = rules_[i];
        if (r.from == WorkflowState::Done)
            throw ValidationError("Done must not have outgoing transitions");
        if (r.action && r.action->kind == RobotAction::Kind::FetchCard &&
            !r.action->card)
            throw ValidationError("fetch_card action needs a card");
        for (std::size_t j = 0; j < i; ++j)
            if (rules_[j].from == r.from && same_command(rules_[j].trigger, r.trigger))
                throw ValidationError("duplicate transition for " +
                                      state_name(r.from) + " on " +
                                      command_name(r.trigger));
    }
}

const TransitionRule* WorkflowDefinition::find(WorkflowState state,
                                               const Command& command) const {
    for (const auto& r : rules_)
        if (r.from == state && same_command(r.trigger, command)) return &r;
    return nullptr;
}

WorkflowDefinition tv_assembly_workflow() {
    using K = RobotAction::Kind;
    const Command press = ForcePress{};
    auto g = [](Gesture gesture) { return Command{gesture}; };
    std::vector<TransitionRule> rules = {
        // Green-card leg: fetch, hand over, operator verifies the card works.
        {WorkflowState::Idle, g(Gesture::Start), WorkflowState::FetchGreen,
         RobotAction{K::FetchCard, Card::Green}},
        {WorkflowState::FetchGreen, g(Gesture::Waiting), WorkflowState::HandoverGreen,
         RobotAction{K::MoveToHandover, {}}},
        {WorkflowState::FetchGreen, press, WorkflowState::AwaitGreenVerify,
         RobotAction{K::ReleaseCard, {}}},
        {WorkflowState::HandoverGreen, press, WorkflowState::AwaitGreenVerify,
         RobotAction{K::ReleaseCard, {}}},
        {WorkflowState::HandoverGreen, g(Gesture::GreenFunctioning),
         WorkflowState::PlaceGreen, RobotAction{K::ReleaseCard, {}}},
        {WorkflowState::AwaitGreenVerify, g(Gesture::GreenFunctioning),
         WorkflowState::PlaceGreen, RobotAction{K::ReturnToWait, {}}},
        {WorkflowState::AwaitGreenVerify, g(Gesture::GreenNotFunctioning),
         WorkflowState::FetchGreen, RobotAction{K::FetchCard, Card::Green}},
        // Robot fetches the gold card while the operator places the green one.
        {WorkflowState::PlaceGreen, g(Gesture::PlaceGreenCard),
         WorkflowState::FetchGold, RobotAction{K::FetchCard, Card::Gold}},
        {WorkflowState::FetchGold, g(Gesture::ScrewGreenCard),
         WorkflowState::HandoverGold, RobotAction{K::MoveToHandover, {}}},
        {WorkflowState::FetchGold, g(Gesture::Waiting), WorkflowState::HandoverGold,
         RobotAction{K::MoveToHandover, {}}},
        {WorkflowState::FetchGold, press, WorkflowState::AwaitGoldVerify,
         RobotAction{K::ReleaseCard, {}}},
        {WorkflowState::HandoverGold, press, WorkflowState::AwaitGoldVerify,
         RobotAction{K::ReleaseCard, {}}},
        {WorkflowState::HandoverGold, g(Gesture::GoldFunctioning),
         WorkflowState::PlaceGold, RobotAction{K::ReleaseCard, {}}},
        {WorkflowState::AwaitGoldVerify, g(Gesture::GoldFunctioning),
         WorkflowState::PlaceGold, RobotAction{K::ReturnToWait, {}}},
        {WorkflowState::AwaitGoldVerify, g(Gesture::GoldNotFunctioning),
         WorkflowState::FetchGold, RobotAction{K::FetchCard, Card::Gold}},
        // Gold-card finishing moves; screwing steps keep the robot parked.
        {WorkflowState::PlaceGold, g(Gesture::PlaceGoldCard), WorkflowState::PlaceGold,
         std::nullopt},
        {WorkflowState::PlaceGold, g(Gesture::ScrewGoldCard), WorkflowState::PlaceGold,
         std::nullopt},
        {WorkflowState::PlaceGold, g(Gesture::End), WorkflowState::Done,
         RobotAction{K::Halt, {}}},
    };
    return WorkflowDefinition(std::move(rules));
}

WorkflowDefinition load_workflow(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_version = false;
    std::vector<TransitionRule> rules;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = detail::trim(line);
        if (view.empty() || view.front() == '#') continue;
        if (!have_version) {
            if (view != "workflow 1") throw ParseError("expected 'workflow 1'", line_no);
            have_version = true;
            continue;
        }
        const auto tokens = detail::split(view, ' ');
        if (tokens.size() != 5 || tokens[0] != "transition")
            throw ParseError("expected 'transition <from> <command> <to> <action>'",
                             line_no);
        try {
            TransitionRule rule;
            rule.from = parse_state(std::string(tokens[1]));
            rule.trigger = parse_command(std::string(tokens[2]));
            rule.to = parse_state(std::string(tokens[3]));
            if (tokens[4] != "none")
                rule.action = parse_action(std::string(tokens[4]));
            rules.push_back(std::move(rule));
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    if (!have_version) throw ParseError("missing 'workflow 1' line");
    return WorkflowDefinition(std::move(rules));
}

WorkflowDefinition load_workflow_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open workflow file '" + path + "'");
    return load_workflow(in);
}

void save_workflow(const WorkflowDefinition& definition, std::ostream& out) {
    out << "# assembly routine: transition <from> <command> <to> <action>\n";
    out << "workflow 1\n";
    for (const auto& r : definition.rules()) {
        out << "transition " << state_name(r.from) << ' ' << command_name(r.trigger)
            << ' ' << state_name(r.to) << ' '
            << (r.action ? action_name(*r.action) : std::string("none")) << '\n';
    }
}

void save_workflow_file(const WorkflowDefinition& definition,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write workflow file '" + path + "'");
    save_workflow(definition, out);
}

StepResult step(const WorkflowDefinition& definition, WorkflowState state,
                const Command& command) {
    const TransitionRule* rule = definition.find(state, command);
    if (!rule) return {state, std::nullopt, false};
    return {rule->to, rule->action, true};
}

RoutineTrace run_routine(const WorkflowDefinition& definition,
                         const std::vector<ConfirmedCommand>& commands) {
    RoutineTrace trace;
    WorkflowState state = WorkflowState::Idle;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        TraceStep ts;
        ts.event_index = i;
        ts.state_before = state;
        ts.command = commands[i].command;
        const auto result = step(definition, state, commands[i].command);
        ts.accepted = result.accepted;
        ts.action = result.action;
        ts.state_after = result.state;
        state = result.state;
        trace.steps.push_back(std::move(ts));
        if (state == WorkflowState::Done) break;  // Done has no outgoing edges
    }
    trace.final_state = state;
    trace.completed = state == WorkflowState::Done;
    return trace;
}

void write_trace_csv(const RoutineTrace& trace, std::ostream& out) {
    out << "event_index,state_before,command,accepted,action,state_after\n";
    for (const auto& ts : trace.steps) {
        out << ts.event_index << ',' << state_name(ts.state_before) << ','
            << command_name(ts.command) << ',' << (ts.accepted ? "yes" : "no") << ','
            << (ts.action ? action_name(*ts.action) : std::string("none")) << ','
            << state_name(ts.state_after) << '\n';
    }
}

}  // namespace ergohrc
