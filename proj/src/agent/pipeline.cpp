#include "blockwright/agent/pipeline.hpp"

#include <sstream>

#include "blockwright/grammar/generator.hpp"
#include "blockwright/grammar/parser.hpp"
#include "blockwright/llm/cot.hpp"
#include "blockwright/llm/extract.hpp"
#include "blockwright/memory/shape_graph.hpp"

namespace blockwright::agent {

namespace {

using nlohmann::ordered_json;

std::string field_word(Field f) {
  switch (f) {
  case Field::Kind: return "part";
  case Field::Color: return "color";
  case Field::X: return "column";
  case Field::Y: return "row";
  default: return std::string(field_name(f));
  }
}

std::string action_words(const Action &action) {
  if (const auto *p = std::get_if<PlaceAction>(&action)) {
    return std::string(to_symbol(p->color)) + " " + std::string(display_name(p->kind)) + " at column " +
           std::to_string(p->anchor.x) + ", row " + std::to_string(p->anchor.y) + ", height " +
           std::to_string(p->anchor.z);
  }
  const auto &r = std::get<RemoveAction>(action);
  return "removal at column " + std::to_string(r.cell.x) + ", row " + std::to_string(r.cell.y) + ", height " +
         std::to_string(r.cell.z);
}

Failed execution_failure(const executor::ExecutionLog &log) {
  const auto *bad = log.failure();
  Error e = *bad->error;
  e.message = "cannot place the " + action_words(bad->action) + ": " + e.message;
  return Failed{e};
}

} // namespace

ordered_json outcome_to_json(const TurnOutcome &outcome) {
  return std::visit(
      [](const auto &o) -> ordered_json {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Clarify>) {
          ordered_json j{{"type", "clarify"}, {"question", o.question}, {"id", o.id}};
          if (o.target) {
            j["item"] = o.target->item;
            j["field"] = std::string(field_name(o.target->field));
          }
          return j;
        } else if constexpr (std::is_same_v<T, Execute>) {
          return {{"type", "execute"}, {"program", o.program.to_json()}, {"stored", o.stored}};
        } else if constexpr (std::is_same_v<T, Stored>) {
          return {{"type", "stored"}, {"name", o.name}, {"version", o.version}, {"parts", o.parts}};
        } else {
          return {{"type", "error"}, {"code", errc_name(o.error.code)}, {"message", o.error.message}};
        }
      },
      outcome);
}

std::string outcome_text(const TurnOutcome &outcome) {
  return std::visit(
      [](const auto &o) -> std::string {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Clarify>) {
          return o.question;
        } else if constexpr (std::is_same_v<T, Execute>) {
          const auto n = o.program.actions.size();
          std::string s = "Placed " + std::to_string(n) + (n == 1 ? " part." : " parts.");
          for (const auto &name : o.stored) s += " Stored " + name + ".";
          return s;
        } else if constexpr (std::is_same_v<T, Stored>) {
          return "Stored " + o.name + " (" + std::to_string(o.parts) + " parts).";
        } else {
          return o.error.message;
        }
      },
      outcome);
}

ordered_json dialogue_entry_to_json(const DialogueEntry &entry) {
  ordered_json j{{"role", entry.role}, {"text", entry.text}};
  if (entry.cancel) {
    j["outcome"] = {{"type", "cancel"}};
  } else {
    j["outcome"] = entry.outcome ? outcome_to_json(*entry.outcome) : ordered_json();
  }
  return j;
}

std::string Pipeline::dialogue_jsonl() const {
  std::string out;
  for (const auto &e : dialogue()) out += dialogue_entry_to_json(e).dump() + "\n";
  return out;
}

Agent::Agent(std::shared_ptr<llm::Backend> backend, std::shared_ptr<memory::ShapeStore> shapes)
    : backend_(std::move(backend)), shapes_(shapes ? std::move(shapes) : std::make_shared<memory::ShapeStore>()) {}

std::optional<Clarify> Agent::pending_question() const {
  if (!open_) return std::nullopt;
  return Clarify{open_->question, open_->question_id, open_->state.asked.at(open_->question_id)};
}

TurnOutcome Agent::process_turn(std::string_view text) {
  dialogue_.push_back({"architect", std::string(text), std::nullopt});
  TurnOutcome outcome = open_ ? answer(text) : start(text);
  dialogue_.push_back({"system", outcome_text(outcome), outcome});
  return outcome;
}

void Agent::cancel_turn() {
  if (!open_) return;
  dialogue_.push_back({"architect", "", std::nullopt, true});
  open_.reset();
  turns_.back().final = Failed{make_error(Errc::InvalidArgument, "turn cancelled")};
}

TurnOutcome Agent::close(TurnOutcome outcome) {
  open_.reset();
  turns_.back().final = outcome;
  return outcome;
}

TurnOutcome Agent::start(std::string_view text) {
  turns_.push_back({});
  turns_.back().inputs.emplace_back(text);

  auto reply = backend_->complete(llm::prompt_for(llm::Role::Parser), {{"user", std::string(text)}});
  if (!reply) return close(Failed{reply.error()});
  auto plans = llm::extract_structures(reply.value());
  if (!plans) return close(Failed{plans.error()});
  if (plans.value().empty()) {
    return close(Failed{make_error(Errc::Unparseable, "I could not read an instruction in \"" +
                                                          std::string(text) + "\"")});
  }

  OpenTurn turn;
  for (const auto &plan : plans.value()) {
    auto parsed = grammar::parse_instruction(plan.plan);
    if (!parsed) return close(Failed{parsed.error()});
    for (auto &item : parsed.value()) turn.items.push_back(std::move(item));
  }
  turns_.back().parsed = turn.items;
  for (const auto &item : turn.items) {
    if (const auto *spec = std::get_if<PartialPlacementSpec>(&item)) {
      turn.answered.push_back(*spec);
    } else if (const auto *recall = std::get_if<RecallCommand>(&std::get<MemoryCommand>(item))) {
      turn.answered.push_back(recall->target);
    }
  }
  open_ = std::move(turn);
  return advance();
}

TurnOutcome Agent::answer(std::string_view text) {
  OpenTurn &turn = *open_;
  turns_.back().inputs.emplace_back(text);
  auto merged = merge_answer(turn.state, turn.question_id, text, turn.answered);
  if (!merged) {
    if (merged.error().code != Errc::UnusableAnswer || turn.reasks >= kMaxReasks) {
      return close(Failed{merged.error()});
    }
    ++turn.reasks;
    const PendingField target = turn.state.asked.at(turn.question_id);
    return Clarify{"Sorry, I need a " + field_word(target.field) + ". " + turn.question, turn.question_id, target};
  }
  return advance();
}

TurnOutcome Agent::advance() {
  OpenTurn &turn = *open_;
  GridState scratch = grid_;
  LocateContext ctx{&scratch, {}};
  std::vector<TurnItem> items;
  std::size_t spec_index = 0;

  for (const auto &parsed : turn.items) {
    const RecallCommand *recall = nullptr;
    if (const auto *cmd = std::get_if<MemoryCommand>(&parsed)) {
      recall = std::get_if<RecallCommand>(cmd);
      if (recall == nullptr) continue;
    }
    auto located = locate(turn.answered[spec_index++], ctx);
    if (!located) return close(Failed{located.error()});
    TurnItem item{std::move(located).value(), recall ? std::optional<RecallCommand>(*recall) : std::nullopt};

    auto built = build(item, *shapes_, scratch);
    if (!built) {
      if (built.error().code == Errc::UnknownShape) {
        return close(Clarify{"I do not know a shape called " + recall->name + ". Could you describe how to build it?",
                             "", std::nullopt});
      }
      return close(Failed{built.error()});
    }
    if (recall && built.value().parts.empty()) ctx.recent.push_back({});
    for (const auto &part : built.value().parts) {
      AnchorCandidate c{part.kind, part.color, std::nullopt};
      if (part.x && part.y && part.z) c.anchor = Cell{*part.x, *part.y, *part.z};
      ctx.recent.push_back(c);
      if (part.kind && part.color && c.anchor) {
        if (auto next = place(scratch, *part.kind, *part.color, *c.anchor)) scratch = std::move(next).value();
      }
    }
    items.push_back(std::move(item));
  }

  if (auto pending = next_clarification(items)) {
    const std::string id = "q" + std::to_string(++question_counter_);
    turn.state.asked[id] = *pending;
    turn.state.pending = {*pending};
    turn.question_id = id;
    turn.question = question_text(items, *pending);
    turn.reasks = 0;
    turns_.back().asked.push_back(*pending);
    return Clarify{turn.question, id, *pending};
  }
  return finish(items);
}

TurnOutcome Agent::finish(const std::vector<TurnItem> &items) {
  std::vector<PartialPlacementSpec> specs;
  GridState scratch = grid_;
  for (const auto &item : items) {
    auto built = build(item, *shapes_, scratch);
    if (!built) return close(Failed{built.error()});
    for (auto &part : built.value().parts) {
      if (part.kind && part.color && part.x && part.y && part.z) {
        if (auto next = place(scratch, *part.kind, *part.color, {*part.x, *part.y, *part.z})) {
          scratch = std::move(next).value();
        }
      }
      specs.push_back(std::move(part));
    }
  }
  if (auto traced = check_provenance(specs); !traced) return close(Failed{traced.error()});
  turns_.back().executed = specs;

  std::vector<std::string> names;
  for (const auto &parsed : open_->items) {
    if (const auto *cmd = std::get_if<MemoryCommand>(&parsed)) {
      if (const auto *name = std::get_if<NameCommand>(cmd)) names.push_back(name->name);
    }
  }

  GridState next = grid_;
  Execute execute;
  if (!specs.empty()) {
    auto program = executor::compile(specs, turns_.back().inputs.front());
    if (!program) return close(Failed{program.error()});
    auto run = executor::run(program.value(), grid_);
    if (!run.log.ok()) return close(execution_failure(run.log));
    next = std::move(run.grid);
    execute.program = std::move(program).value();
  }

  std::optional<Stored> last_stored;
  for (const auto &name : names) {
    std::vector<PlacedPart> structure;
    for (const auto &[id, part] : next.parts()) {
      if (id >= structure_start_) structure.push_back(part);
    }
    if (structure.empty()) {
      return close(Failed{make_error(Errc::InvalidArgument, "nothing has been built since the last named shape")});
    }
    auto version = shapes_->store(memory::to_graph(structure, name));
    if (!version) return close(Failed{version.error()});
    structure_start_ = next.next_id();
    last_stored = Stored{name, version.value(), structure.size()};
    execute.stored.push_back(name);
  }
  grid_ = std::move(next);

  if (specs.empty()) {
    if (last_stored) return close(*last_stored);
    return close(Failed{make_error(Errc::Unparseable, "the instruction asks for nothing to be built")});
  }
  return close(execute);
}

CotAgent::CotAgent(std::shared_ptr<llm::Backend> backend) : backend_(std::move(backend)) {}

void CotAgent::cancel_turn() {
  if (history_.empty()) return;
  dialogue_.push_back({"architect", "", std::nullopt, true});
  history_.clear();
  turns_.back().final = Failed{make_error(Errc::InvalidArgument, "turn cancelled")};
}

TurnOutcome CotAgent::process_turn(std::string_view text) {
  dialogue_.push_back({"architect", std::string(text), std::nullopt});
  if (history_.empty()) turns_.push_back({});
  turns_.back().inputs.emplace_back(text);
  history_.push_back({"user", std::string(text)});

  auto finish = [this](TurnOutcome outcome) {
    dialogue_.push_back({"system", outcome_text(outcome), outcome});
    if (!std::holds_alternative<Clarify>(outcome)) {
      history_.clear();
      turns_.back().final = outcome;
    }
    return outcome;
  };

  auto reply = backend_->complete(llm::prompt_for(llm::Role::Cot), history_);
  if (!reply) return finish(Failed{reply.error()});
  auto parsed = llm::parse_cot_reply(reply.value());
  if (!parsed) return finish(Failed{parsed.error()});
  if (parsed.value().question) {
    history_.push_back({"assistant", reply.value()});
    return finish(Clarify{*parsed.value().question, "q" + std::to_string(++question_counter_), std::nullopt});
  }
  executor::ActionProgram program{parsed.value().actions, turns_.back().inputs.front()};
  auto run = executor::run(program, grid_);
  if (!run.log.ok()) return finish(execution_failure(run.log));
  grid_ = std::move(run.grid);
  for (const auto &action : program.actions) {
    if (const auto *place = std::get_if<PlaceAction>(&action)) {
      PartialPlacementSpec s;
      s.kind = place->kind;
      s.color = place->color;
      s.x = place->anchor.x;
      s.y = place->anchor.y;
      s.z = place->anchor.z;
      turns_.back().executed.push_back(s);
    }
  }
  return finish(Execute{std::move(program), {}});
}

Result<std::vector<std::optional<std::string>>> read_dialogue(std::string_view jsonl) {
  std::vector<std::optional<std::string>> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("role") || !j["role"].is_string() ||
        !j.contains("text") || !j["text"].is_string()) {
      return make_error(Errc::CorruptLog, "dialogue line " + std::to_string(number) + " is not a turn record",
                        number);
    }
    const std::string role = j["role"];
    if (role == "architect") {
      const bool cancel = j.contains("outcome") && j["outcome"].is_object() && j["outcome"].value("type", "") == "cancel";
      out.push_back(cancel ? std::nullopt : std::optional<std::string>(j["text"].get<std::string>()));
    } else if (role != "system") {
      return make_error(Errc::CorruptLog, "dialogue line " + std::to_string(number) + " has role '" + role + "'",
                        number);
    }
  }
  if (!jsonl.empty() && jsonl.back() != '\n') {
    return make_error(Errc::CorruptLog, "dialogue line " + std::to_string(number) + " is truncated", number);
  }
  return out;
}

Result<std::unique_ptr<Agent>> replay_dialogue(std::string_view jsonl, std::shared_ptr<llm::Backend> backend,
                                               std::shared_ptr<memory::ShapeStore> shapes) {
  auto lines = read_dialogue(jsonl);
  if (!lines) return lines.error();
  auto agent = std::make_unique<Agent>(std::move(backend), std::move(shapes));
  for (const auto &text : lines.value()) {
    if (text) {
      (void)agent->process_turn(*text);
    } else {
      agent->cancel_turn();
    }
  }
  return agent;
}

} // namespace blockwright::agent
