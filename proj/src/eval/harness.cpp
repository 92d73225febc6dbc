#include "blockwright/eval/harness.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "blockwright/grammar/lexicon.hpp"
#include "blockwright/grammar/spec_json.hpp"
#include "blockwright/grid/wire.hpp"
#include "blockwright/memory/shape_graph.hpp"

namespace blockwright::eval {

namespace {

using nlohmann::ordered_json;

constexpr int kMaxExchanges = 32;

// Task (iii) reference accuracy over all scored instructions.
constexpr double kReferenceOverall = 33.0 / 42.0;

struct Dialogue {
  std::optional<agent::TurnOutcome> final;
  int answers = 0;
};

// Feeds one instruction and answers every question from gold.
Dialogue converse(agent::Pipeline &p, const std::string &text, const std::vector<GoldPart> &gold) {
  Dialogue d;
  auto outcome = p.process_turn(text);
  while (d.answers < kMaxExchanges) {
    const auto *q = std::get_if<agent::Clarify>(&outcome);
    if (q == nullptr || !q->target || q->target->item >= gold.size()) break;
    ++d.answers;
    outcome = p.process_turn(oracle_answer(gold[q->target->item].action, q->target->field));
  }
  if (p.awaiting_answer()) p.cancel_turn();
  d.final = outcome;
  return d;
}

bool executed(const Dialogue &d) { return d.final && std::holds_alternative<agent::Execute>(*d.final); }

std::optional<PlaceAction> concrete(const PartialPlacementSpec &s) {
  if (!s.kind || !s.color || !s.x || !s.y || !s.z) return std::nullopt;
  return PlaceAction{*s.kind, *s.color, {*s.x, *s.y, *s.z}};
}

// Executed placements of the case's turn, in part order.
std::vector<std::optional<PlaceAction>> predictions(const agent::Pipeline &p, const Dialogue &d, std::size_t n) {
  std::vector<std::optional<PlaceAction>> out(n);
  if (!executed(d) || p.turns().empty()) return out;
  const auto &specs = p.turns().front().executed;
  for (std::size_t i = 0; i < n && i < specs.size(); ++i) out[i] = concrete(specs[i]);
  return out;
}

std::vector<PartialPlacementSpec> parsed_specs(const agent::Pipeline &p) {
  std::vector<PartialPlacementSpec> out;
  if (p.turns().empty()) return out;
  for (const auto &item : p.turns().front().parsed) {
    if (const auto *s = std::get_if<PartialPlacementSpec>(&item)) out.push_back(*s);
  }
  return out;
}

ordered_json outcome_json(const Dialogue &d) {
  return d.final ? agent::outcome_to_json(*d.final) : ordered_json();
}

ordered_json optional_action(const std::optional<PlaceAction> &a) {
  return a ? wire::action_to_json(Action{*a}) : ordered_json();
}

struct PartTally {
  Rate kind, color, coordinates;
  void add(const std::optional<PlaceAction> &pred, const PlaceAction &gold) {
    const PartMatch m = pred ? match_part(*pred, gold) : PartMatch{};
    kind.add(m.kind);
    color.add(m.color);
    coordinates.add(m.coordinates);
  }
};

// Per-case results, reduced single-threaded after the run.
struct CaseOutcome {
  ordered_json detail;
  std::vector<std::optional<PlaceAction>> predicted;
  std::vector<PartialPlacementSpec> parsed;
  std::vector<agent::PendingField> asked;
  bool executed = false;
  int answers = 0;
  // iii / v
  std::vector<bool> turn_correct;
  std::optional<bool> built, equivalent;
};

CaseOutcome run_parts_case(const TaskCase &c, const PipelineFactory &factory) {
  CaseOutcome out;
  auto p = factory();
  const Dialogue d = converse(*p, c.turns.front(), c.parts);
  out.executed = executed(d);
  out.answers = d.answers;
  out.predicted = predictions(*p, d, c.parts.size());
  out.parsed = parsed_specs(*p);
  if (!p->turns().empty()) out.asked = p->turns().front().asked;
  out.detail = {{"id", c.id}, {"outcome", outcome_json(d)}, {"answers", d.answers}};
  ordered_json preds = ordered_json::array();
  for (const auto &a : out.predicted) preds.push_back(optional_action(a));
  out.detail["predicted"] = std::move(preds);
  return out;
}

CaseOutcome run_script_case(const TaskCase &c, const PipelineFactory &factory) {
  CaseOutcome out;
  auto p = factory();
  std::vector<PlaceAction> cumulative;
  std::vector<PlacedPart> before_recall;
  ordered_json turns = ordered_json::array();
  for (std::size_t t = 0; t < c.script.size(); ++t) {
    const auto &turn = c.script[t];
    if (c.recall_turn && t == *c.recall_turn) {
      for (const auto &[id, part] : p->grid().parts()) before_recall.push_back(part);
    }
    const Dialogue d = converse(*p, turn.text, {});
    cumulative.insert(cumulative.end(), turn.adds.begin(), turn.adds.end());
    const bool ok = same_parts(grid_actions(p->grid()), cumulative);
    out.turn_correct.push_back(ok);
    turns.push_back({{"text", turn.text}, {"scored", turn.scored}, {"correct", ok}, {"outcome", outcome_json(d)}});
  }
  out.detail = {{"id", c.id}, {"turns", std::move(turns)}};

  if (c.recall_turn) {
    std::set<PartId> old;
    std::vector<PlacedPart> original, recalled;
    std::vector<PlaceAction> original_actions;
    for (const auto &part : before_recall) {
      old.insert(part.id);
      original.push_back(part);
      original_actions.push_back({part.kind, part.color, part.anchor});
    }
    for (const auto &[id, part] : p->grid().parts()) {
      if (!old.count(id)) recalled.push_back(part);
    }
    out.built = same_parts(original_actions, c.original);
    out.equivalent = *out.built && !recalled.empty() && memory::shapes_equivalent(original, recalled);
    out.detail["original_parts"] = original.size();
    out.detail["recalled_parts"] = recalled.size();
    out.detail["built"] = *out.built;
    out.detail["equivalent"] = *out.equivalent;
  }
  return out;
}

template <typename Fn>
std::vector<CaseOutcome> run_all(const std::vector<TaskCase> &cases, unsigned threads, Fn fn) {
  std::vector<CaseOutcome> out(cases.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cases.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < cases.size(); ++i) out[i] = fn(cases[i]);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < cases.size(); i += threads) out[i] = fn(cases[i]);
    });
  }
  for (auto &th : pool) th.join();
  return out;
}

using Rows = std::vector<std::pair<std::string, std::optional<double>>>;

void add_tally(Rows &rows, const std::string &prefix, const PartTally &t) {
  rows.emplace_back(prefix + "part_type", t.kind.value());
  rows.emplace_back(prefix + "color", t.color.value());
  rows.emplace_back(prefix + "coordinates", t.coordinates.value());
}

void add_hallucination(Rows &rows, const HallucinationReport &h) {
  rows.emplace_back("hallucination.part_type", h.part.rate());
  rows.emplace_back("hallucination.color", h.color.rate());
  rows.emplace_back("hallucination.coordinates", h.coordinates.rate());
  rows.emplace_back("gold_null.part_type", h.part.gold_null());
  rows.emplace_back("gold_null.color", h.color.gold_null());
  rows.emplace_back("gold_null.coordinates", h.coordinates.gold_null());
}

Rows reduce_single(const std::vector<TaskCase> &cases, const std::vector<CaseOutcome> &results) {
  PartTally t;
  int questions = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    t.add(results[i].predicted[0], cases[i].parts[0].action);
    questions += static_cast<int>(results[i].asked.size());
  }
  Rows rows;
  add_tally(rows, "", t);
  rows.emplace_back("questions", questions);
  return rows;
}

Rows reduce_pairs(const std::vector<TaskCase> &cases, const std::vector<CaseOutcome> &results) {
  PartTally first, second;
  Rate independent, dependent, anchor;
  int questions = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto &c = cases[i];
    const auto &r = results[i];
    questions += static_cast<int>(r.asked.size());
    first.add(r.predicted[0], c.parts[0].action);
    second.add(r.predicted[1], c.parts[1].action);
    const bool coords = r.predicted[1] && match_part(*r.predicted[1], c.parts[1].action).coordinates;
    const auto &rel = c.parts[1].spec.relation;
    if (!rel) {
      independent.add(coords);
      continue;
    }
    dependent.add(coords);
    bool anchored = false;
    if (r.predicted[0] && r.predicted[1]) {
      const Cell expect = r.predicted[0]->anchor + grammar::relation_offset(rel->kind);
      const Cell got = r.predicted[1]->anchor;
      anchored = got.x == expect.x && got.y == expect.y && (rel->kind != RelationKind::OnTop || got.z == expect.z);
    }
    anchor.add(anchored);
  }
  Rows rows;
  add_tally(rows, "first.", first);
  rows.emplace_back("second.part_type", second.kind.value());
  rows.emplace_back("second.color", second.color.value());
  rows.emplace_back("second.independent", independent.value());
  rows.emplace_back("second.dependent", dependent.value());
  rows.emplace_back("second.anchor", anchor.value());
  rows.emplace_back("questions", questions);
  return rows;
}

Rows reduce_underspecified(const std::vector<TaskCase> &cases, const std::vector<CaseOutcome> &results) {
  Rate detected, asked, correct;
  HallucinationReport halluc;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto &c = cases[i];
    const auto &r = results[i];
    std::vector<PartialPlacementSpec> gold;
    bool all_null = true, all_asked = true;
    for (std::size_t k = 0; k < c.parts.size(); ++k) {
      gold.push_back(c.parts[k].spec);
      for (Field f : kQuestionOrder) {
        if (!gold_null(c.parts[k].spec, f)) continue;
        if (k >= r.parsed.size() || r.parsed[k].has(f)) all_null = false;
        if (std::find(r.asked.begin(), r.asked.end(), agent::PendingField{k, f}) == r.asked.end()) all_asked = false;
      }
    }
    detected.add(all_null);
    asked.add(all_asked);
    if (!r.asked.empty()) {
      bool all = r.executed;
      for (std::size_t k = 0; k < c.parts.size() && all; ++k) {
        all = r.predicted[k] && match_part(*r.predicted[k], c.parts[k].action).all();
      }
      correct.add(all);
    }
    halluc.merge(hallucination_rate(r.parsed, gold));
  }
  Rows rows;
  rows.emplace_back("missing_info_detected", detected.value());
  rows.emplace_back("cq_asked", asked.value());
  rows.emplace_back("correct_after_cq", correct.value());
  rows.emplace_back("cq_cases", correct.total);
  add_hallucination(rows, halluc);
  return rows;
}

Rows reduce_scripts(const std::vector<TaskCase> &cases, const std::vector<CaseOutcome> &results) {
  Rows rows;
  Rate overall;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    Rate shape;
    for (std::size_t t = 0; t < cases[i].script.size(); ++t) {
      if (!cases[i].script[t].scored) continue;
      shape.add(results[i].turn_correct[t]);
      overall.add(results[i].turn_correct[t]);
    }
    rows.emplace_back("shape." + cases[i].id, shape.value());
    rows.emplace_back("reference." + cases[i].id, cases[i].floor);
  }
  rows.emplace_back("overall", overall.value());
  rows.emplace_back("reference.overall", kReferenceOverall);
  return rows;
}

Rows reduce_dialogues(const std::vector<TaskCase> &cases, const std::vector<CaseOutcome> &results) {
  Rows rows;
  Rate equivalent, instructions;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const bool eq = results[i].equivalent.value_or(false);
    equivalent.add(eq);
    for (bool ok : results[i].turn_correct) instructions.add(ok);
    rows.emplace_back("shape." + cases[i].id, eq ? 1.0 : 0.0);
  }
  rows.emplace_back("equivalent", equivalent.value());
  rows.emplace_back("instructions", instructions.value());
  return rows;
}

std::string format_value(const std::optional<double> &v) {
  if (!v) return "n/a";
  std::ostringstream s;
  s << std::setprecision(6) << *v;
  return s.str();
}

} // namespace

std::optional<double> MetricsReport::metric(std::string_view name) const {
  for (const auto &[k, v] : rows) {
    if (k == name) return v;
  }
  return std::nullopt;
}

ordered_json MetricsReport::to_json() const {
  ordered_json metrics = ordered_json::object();
  for (const auto &[k, v] : rows) metrics[k] = v ? ordered_json(*v) : ordered_json();
  ordered_json j{{"task", std::string(task_name(task))}, {"cases", cases}, {"seconds", seconds}};
  j["metrics"] = std::move(metrics);
  j["details"] = details;
  return j;
}

std::string MetricsReport::to_csv() const {
  std::string out = "task,metric,value\n";
  for (const auto &[k, v] : rows) out += std::string(task_name(task)) + "," + k + "," + format_value(v) + "\n";
  return out;
}

MetricsReport run_eval(TaskId task, const std::vector<TaskCase> &cases, const PipelineFactory &factory,
                       unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  MetricsReport report;
  report.task = task;
  report.cases = cases.size();

  const bool scripted = task == TaskId::III || task == TaskId::V;
  std::vector<CaseOutcome> results;
  if (scripted) {
    results = run_all(cases, threads, [&](const TaskCase &c) { return run_script_case(c, factory); });
  } else {
    results = run_all(cases, threads, [&](const TaskCase &c) { return run_parts_case(c, factory); });
  }

  switch (task) {
  case TaskId::I: report.rows = reduce_single(cases, results); break;
  case TaskId::II: report.rows = reduce_pairs(cases, results); break;
  case TaskId::IVSingle:
  case TaskId::IVTwo: report.rows = reduce_underspecified(cases, results); break;
  case TaskId::III: report.rows = reduce_scripts(cases, results); break;
  case TaskId::V: report.rows = reduce_dialogues(cases, results); break;
  case TaskId::Toolbench: break;
  }
  for (auto &r : results) report.details.push_back(std::move(r.detail));
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Result<std::vector<memory::WorkflowCall>> reuse_workflows(const TaskCase &c) {
  memory::WorkflowStore store;
  for (const auto &w : c.workflows) {
    std::vector<memory::Slot> doc;
    for (const auto &[name, role] : w.slots) doc.push_back({name, role});
    auto tmpl = memory::abstract_workflow({w.name, w.example}, doc);
    if (!tmpl) return tmpl.error();
    store.store(std::move(tmpl).value());
  }
  std::vector<memory::WorkflowCall> out;
  for (const auto &info : c.new_information) {
    auto tmpl = store.retrieve(info.workflow);
    if (!tmpl) return tmpl.error();
    auto call = memory::apply_workflow(tmpl.value(), info.bindings);
    if (!call) return call.error();
    out.push_back(std::move(call).value());
  }
  return out;
}

MetricsReport run_workflow_eval(const std::vector<TaskCase> &cases, const WorkflowRunner &runner) {
  const auto start = std::chrono::steady_clock::now();
  MetricsReport report;
  report.task = TaskId::Toolbench;
  report.cases = cases.size();
  std::vector<memory::WorkflowCall> all_pred, all_gold;
  for (const auto &c : cases) {
    std::vector<memory::WorkflowCall> gold;
    for (const auto &[name, args] : c.gold_calls) gold.push_back({name, args});
    auto pred = runner(c);
    ordered_json detail{{"id", c.id}};
    std::vector<memory::WorkflowCall> calls;
    if (pred) {
      calls = std::move(pred).value();
    } else {
      detail["error"] = pred.error().to_string();
    }
    const auto s = function_reuse_metrics(calls, gold);
    detail["precision"] = s.precision;
    detail["recall"] = s.recall;
    ordered_json shown = ordered_json::array();
    for (const auto &call : calls) shown.push_back(call.to_string());
    detail["predicted"] = std::move(shown);
    report.details.push_back(std::move(detail));
    all_pred.insert(all_pred.end(), calls.begin(), calls.end());
    all_gold.insert(all_gold.end(), gold.begin(), gold.end());
  }
  const auto s = function_reuse_metrics(all_pred, all_gold);
  report.rows = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<std::string> threshold_failures(const MetricsReport &report) {
  std::vector<std::string> out;
  auto require = [&](const std::string &name, double want, bool at_most = false) {
    const auto v = report.metric(name);
    if (!v) return; // not applicable
    if (at_most ? *v > want + 1e-9 : *v < want - 1e-9) {
      out.push_back(name + " = " + format_value(v) + (at_most ? ", needs <= " : ", needs >= ") + format_value(want));
    }
  };
  switch (report.task) {
  case TaskId::I:
  case TaskId::II:
    for (const auto &[k, v] : report.rows) {
      if (k != "questions") require(k, 1.0);
    }
    require("questions", 0.0, true);
    break;
  case TaskId::III:
    for (const auto &[k, v] : report.rows) {
      if (k.rfind("shape.", 0) == 0) {
        const auto ref = report.metric("reference." + k.substr(6));
        require(k, ref.value_or(1.0));
      }
    }
    require("overall", kReferenceOverall);
    break;
  case TaskId::IVSingle:
  case TaskId::IVTwo:
    require("missing_info_detected", 1.0);
    require("cq_asked", 1.0);
    require("correct_after_cq", 1.0);
    for (const char *f : {"hallucination.part_type", "hallucination.color", "hallucination.coordinates"}) {
      require(f, 0.0, true);
    }
    break;
  case TaskId::V: require("equivalent", 1.0); break;
  case TaskId::Toolbench:
    require("precision", 1.0);
    require("recall", 1.0);
    require("f1", 1.0);
    break;
  }
  return out;
}

Result<std::filesystem::path> write_report(const MetricsReport &report, const std::filesystem::path &out) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::ostringstream stamp;
  stamp << std::put_time(&tm, "%Y%m%dT%H%M%S") << std::setw(3) << std::setfill('0') << ms << "-"
        << task_name(report.task);
  std::filesystem::path dir = out / stamp.str();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return make_error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
  {
    std::ofstream js(dir / "report.json");
    js << report.to_json().dump(2) << "\n";
    if (!js) return make_error(Errc::Io, "cannot write " + (dir / "report.json").string());
  }
  std::ofstream csv(dir / "report.csv");
  csv << report.to_csv();
  if (!csv) return make_error(Errc::Io, "cannot write " + (dir / "report.csv").string());
  return dir;
}

} // namespace blockwright::eval
