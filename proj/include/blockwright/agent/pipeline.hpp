#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "blockwright/agent/stages.hpp"
#include "blockwright/executor/executor.hpp"
#include "blockwright/llm/backend.hpp"

namespace blockwright::agent {

struct Clarify {
  std::string question;
  std::string id;                     // empty when the turn is closed (rephrase or unknown shape)
  std::optional<PendingField> target; // set while the turn waits for an answer
};

struct Execute {
  executor::ActionProgram program;
  std::vector<std::string> stored; // Name commands carried out after the placements
};

struct Stored {
  std::string name;
  int version = 1;
  std::size_t parts = 0;
};

struct Failed {
  Error error;
};

using TurnOutcome = std::variant<Clarify, Execute, Stored, Failed>;

nlohmann::ordered_json outcome_to_json(const TurnOutcome &outcome);
std::string outcome_text(const TurnOutcome &outcome);

struct DialogueEntry {
  std::string role; // "architect" or "system"
  std::string text;
  std::optional<TurnOutcome> outcome;
  bool cancel = false; // architect withdrew the open turn
};

nlohmann::ordered_json dialogue_entry_to_json(const DialogueEntry &entry);

/// What one instruction turn went through, for scoring.
struct TurnRecord {
  std::vector<std::string> inputs;  // the instruction, then each answer
  std::vector<ParsedItem> parsed;   // parser output before locating or answers
  std::vector<PendingField> asked;  // distinct questions in order
  std::vector<PartialPlacementSpec> executed;
  std::optional<TurnOutcome> final;
};

class Pipeline {
public:
  virtual ~Pipeline() = default;
  /// Starts a turn, or answers the open question when one is pending.
  virtual TurnOutcome process_turn(std::string_view text) = 0;
  virtual bool awaiting_answer() const = 0;
  /// Drops an open turn without changing the grid. Logged so replay
  /// follows the same path.
  virtual void cancel_turn() = 0;
  virtual const GridState &grid() const = 0;
  virtual const std::vector<DialogueEntry> &dialogue() const = 0;
  virtual const std::vector<TurnRecord> &turns() const = 0;

  std::string dialogue_jsonl() const;
};

constexpr int kMaxReasks = 3;

/// Parser, Locator and Builder with the clarification loop in front of the
/// executor.
class Agent final : public Pipeline {
public:
  Agent(std::shared_ptr<llm::Backend> backend, std::shared_ptr<memory::ShapeStore> shapes);

  TurnOutcome process_turn(std::string_view text) override;
  bool awaiting_answer() const override { return open_.has_value(); }
  void cancel_turn() override;
  const GridState &grid() const override { return grid_; }
  const std::vector<DialogueEntry> &dialogue() const override { return dialogue_; }
  const std::vector<TurnRecord> &turns() const override { return turns_; }

  const memory::ShapeStore &shapes() const { return *shapes_; }
  std::optional<Clarify> pending_question() const;

private:
  struct OpenTurn {
    std::vector<ParsedItem> items;
    std::vector<PartialPlacementSpec> answered; // parsed specs with answers merged
    ClarificationState state;
    std::string question_id;
    std::string question;
    int reasks = 0;
  };

  TurnOutcome start(std::string_view text);
  TurnOutcome answer(std::string_view text);
  TurnOutcome advance();
  TurnOutcome finish(const std::vector<TurnItem> &items);
  TurnOutcome close(TurnOutcome outcome);

  std::shared_ptr<llm::Backend> backend_;
  std::shared_ptr<memory::ShapeStore> shapes_;
  GridState grid_;
  PartId structure_start_ = 1;
  int question_counter_ = 0;
  std::optional<OpenTurn> open_;
  std::vector<DialogueEntry> dialogue_;
  std::vector<TurnRecord> turns_;
};

/// One model call per turn: the reply is either place/remove lines or a
/// question, executed without any symbolic checks.
class CotAgent final : public Pipeline {
public:
  explicit CotAgent(std::shared_ptr<llm::Backend> backend);

  TurnOutcome process_turn(std::string_view text) override;
  bool awaiting_answer() const override { return !history_.empty(); }
  void cancel_turn() override;
  const GridState &grid() const override { return grid_; }
  const std::vector<DialogueEntry> &dialogue() const override { return dialogue_; }
  const std::vector<TurnRecord> &turns() const override { return turns_; }

private:
  std::shared_ptr<llm::Backend> backend_;
  GridState grid_;
  std::vector<llm::Message> history_; // open exchange while the model asks
  int question_counter_ = 0;
  std::vector<DialogueEntry> dialogue_;
  std::vector<TurnRecord> turns_;
};

/// Architect lines of a dialogue log, in order; nullopt marks a cancel.
/// CorruptLog names the line.
Result<std::vector<std::optional<std::string>>> read_dialogue(std::string_view jsonl);

/// Feeds the architect lines to a fresh agent.
Result<std::unique_ptr<Agent>> replay_dialogue(std::string_view jsonl, std::shared_ptr<llm::Backend> backend,
                                               std::shared_ptr<memory::ShapeStore> shapes);

} // namespace blockwright::agent
