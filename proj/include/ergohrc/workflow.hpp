#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ergohrc {

inline constexpr std::size_t kDebounceRunLength = 20;

// Gesture IDs G1..G11 with their workflow meanings.
enum class Gesture : int {
    Start = 1,
    GreenFunctioning = 2,
    PlaceGreenCard = 3,
    ScrewGreenCard = 4,
    ScrewGoldCard = 5,
    End = 6,
    Waiting = 7,
    GoldFunctioning = 8,
    PlaceGoldCard = 9,
    GreenNotFunctioning = 10,
    GoldNotFunctioning = 11,
};

inline constexpr int kMinGestureId = 1;
inline constexpr int kMaxGestureId = 11;

Gesture gesture_from_id(int id);  // throws ValidationError outside 1..11
std::string gesture_name(Gesture g);  // "G1".."G11"

// The force sensor press is a command in its own right, not a gesture.
struct ForcePress {
    bool operator==(const ForcePress&) const = default;
};

using Command = std::variant<Gesture, ForcePress>;

std::string command_name(const Command& c);  // "G3" or "press"
Command parse_command(const std::string& name);

struct GestureFrameEvent {
    std::size_t frame_index = 0;
    Gesture gesture = Gesture::Waiting;
    double timestamp = 0.0;  // seconds
};

// A command that survived the consecutive-frame filter. frame_index is the
// frame that completed the run (or the event index for a force press).
struct ConfirmedCommand {
    std::size_t frame_index = 0;
    Command command;
};

// Emits a command every time the same gesture arrives in run_length
// consecutive events; the counter resets after each emission and on any
// differing gesture.
std::vector<ConfirmedCommand> debounce(const std::vector<GestureFrameEvent>& stream,
                                       std::size_t run_length = kDebounceRunLength);

// Streaming variant of the same filter.
class GestureDebouncer {
  public:
    explicit GestureDebouncer(std::size_t run_length = kDebounceRunLength);
    // Returns the confirmed command when this event completes a run.
    std::optional<ConfirmedCommand> feed(const GestureFrameEvent& event);
    void reset();

  private:
    std::size_t run_length_;
    std::size_t count_ = 0;
    Gesture current_ = Gesture::Waiting;
};

enum class WorkflowState {
    Idle,
    FetchGreen,
    HandoverGreen,
    AwaitGreenVerify,
    PlaceGreen,
    FetchGold,
    HandoverGold,
    AwaitGoldVerify,
    PlaceGold,
    Done,
};

std::string state_name(WorkflowState s);
WorkflowState parse_state(const std::string& name);

enum class Card { Green, Gold };

struct RobotAction {
    enum class Kind { FetchCard, MoveToHandover, ReleaseCard, ReturnToWait, Halt };
    Kind kind = Kind::Halt;
    std::optional<Card> card;  // present iff kind == FetchCard

    bool operator==(const RobotAction&) const = default;
};

std::string action_name(const RobotAction& a);
RobotAction parse_action(const std::string& name);

struct TransitionRule {
    WorkflowState from = WorkflowState::Idle;
    Command trigger;
    WorkflowState to = WorkflowState::Idle;
    std::optional<RobotAction> action;
};

class WorkflowDefinition {
  public:
    explicit WorkflowDefinition(std::vector<TransitionRule> rules);

    const std::vector<TransitionRule>& rules() const { return rules_; }
    // nullptr when the command is not accepted in this state.
    const TransitionRule* find(WorkflowState state, const Command& command) const;

  private:
    std::vector<TransitionRule> rules_;
};

// The shipped two-card assembly routine.
WorkflowDefinition tv_assembly_workflow();

WorkflowDefinition load_workflow(std::istream& in);
WorkflowDefinition load_workflow_file(const std::string& path);
void save_workflow(const WorkflowDefinition& definition, std::ostream& out);
void save_workflow_file(const WorkflowDefinition& definition, const std::string& path);

struct StepResult {
    WorkflowState state = WorkflowState::Idle;
    std::optional<RobotAction> action;
    bool accepted = false;
};

// Invalid commands leave the state unchanged and come back rejected.
StepResult step(const WorkflowDefinition& definition, WorkflowState state,
                const Command& command);

struct TraceStep {
    std::size_t event_index = 0;
    WorkflowState state_before = WorkflowState::Idle;
    Command command;
    bool accepted = false;
    std::optional<RobotAction> action;
    WorkflowState state_after = WorkflowState::Idle;
};

struct RoutineTrace {
    std::vector<TraceStep> steps;
    WorkflowState final_state = WorkflowState::Idle;
    bool completed = false;  // true iff Done was reached
};

RoutineTrace run_routine(const WorkflowDefinition& definition,
                         const std::vector<ConfirmedCommand>& commands);

void write_trace_csv(const RoutineTrace& trace, std::ostream& out);

}  // namespace ergohrc
