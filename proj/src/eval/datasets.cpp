#include "blockwright/eval/datasets.hpp"

#include <cstdlib>
#include <fstream>
#include <random>

#include "blockwright/common/text.hpp"
#include "blockwright/grammar/generator.hpp"
#include "blockwright/grammar/lexicon.hpp"
#include "blockwright/grammar/spec_json.hpp"
#include "blockwright/grid/wire.hpp"

#ifndef BLOCKWRIGHT_FIXTURE_DIR
#define BLOCKWRIGHT_FIXTURE_DIR "fixtures"
#endif

namespace blockwright::eval {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using grammar::TemplateId;

constexpr std::array<std::string_view, 10> kShapeScripts = {"a", "b", "c", "d", "e", "g", "x", "square", "plus",
                                                            "moroccan_bridge"};
constexpr std::array<std::string_view, 9> kShapeDialogues = {"a20_tower", "c15",  "d21",   "x34",  "square",
                                                             "triad",     "face", "i",     "skull"};
constexpr std::array<RelationKind, 5> kAdjacent = {RelationKind::NextTo, RelationKind::LeftOf, RelationKind::RightOf,
                                                   RelationKind::InFront, RelationKind::Behind};

// Portable draws: the standard distributions differ between libraries.
class Draw {
public:
  explicit Draw(std::uint32_t seed) : rng_(seed) {}
  int below(int n) { return static_cast<int>(rng_() % static_cast<std::uint32_t>(n)); }
  int coord(int max = kGridSize) { return 1 + below(max); }
  PartKind kind(bool bridges = true) {
    if (!bridges) {
      static constexpr std::array<PartKind, 7> kSingle = {PartKind::Screw,  PartKind::Nut,    PartKind::Washer,
                                                          PartKind::Bolt,   PartKind::Gasket, PartKind::HexNut,
                                                          PartKind::SquareNut};
      return kSingle[static_cast<std::size_t>(below(static_cast<int>(kSingle.size())))];
    }
    return kAllPartKinds[static_cast<std::size_t>(below(static_cast<int>(kAllPartKinds.size())))];
  }
  Color color() { return kAllColors[static_cast<std::size_t>(below(static_cast<int>(kAllColors.size())))]; }

private:
  std::mt19937 rng_;
};

std::vector<Cell> cells(const PlaceAction &a) { return footprint(a.kind, a.anchor).value(); }

bool overlaps_xy(const PlaceAction &a, const PlaceAction &b) {
  for (const auto &p : cells(a)) {
    for (const auto &q : cells(b)) {
      if (p.x == q.x && p.y == q.y) return true;
    }
  }
  return false;
}

// Absolute spec with bridge extents; coordinates chosen so the footprint fits.
PartialPlacementSpec absolute_spec(Draw &d, PartKind kind, Color color) {
  PartialPlacementSpec s;
  s.kind = kind;
  s.color = color;
  s.x = d.coord(kind == PartKind::HorizontalBridge ? kGridSize - 1 : kGridSize);
  s.y = d.coord(kind == PartKind::VerticalBridge ? kGridSize - 1 : kGridSize);
  if (kind == PartKind::HorizontalBridge) s.x2 = *s.x + 1;
  if (kind == PartKind::VerticalBridge) s.y2 = *s.y + 1;
  return s;
}

PartialPlacementSpec relative_spec(Draw &d, PartKind kind, Color color) {
  std::vector<RelativeLabel> fitting;
  for (int i = 0; i <= static_cast<int>(RelativeLabel::RightMiddle); ++i) {
    const auto label = static_cast<RelativeLabel>(i);
    const auto [x, y] = grammar::resolve_relative(label);
    if (kind == PartKind::HorizontalBridge && x == kGridSize) continue;
    if (kind == PartKind::VerticalBridge && y == kGridSize) continue;
    fitting.push_back(label);
  }
  PartialPlacementSpec s;
  s.kind = kind;
  s.color = color;
  s.relative = fitting[static_cast<std::size_t>(d.below(static_cast<int>(fitting.size())))];
  return s;
}

PlaceAction ground_action(const PartialPlacementSpec &s) {
  int x = 0, y = 0;
  if (s.relative) {
    std::tie(x, y) = grammar::resolve_relative(*s.relative);
  } else {
    x = *s.x;
    y = *s.y;
  }
  return {*s.kind, *s.color, {x, y, 1}};
}

PartialPlacementSpec omit(PartialPlacementSpec s, const std::vector<Field> &fields) {
  for (Field f : fields) {
    s.clear(f);
    if (f == Field::X) s.x2.reset();
    if (f == Field::Y) s.y2.reset();
  }
  return s;
}

// Omission strata, cycled: part name, color, column, row, both coordinates.
std::vector<Field> stratum_fields(int stratum) {
  switch (stratum) {
  case 0: return {Field::Kind};
  case 1: return {Field::Color};
  case 2: return {Field::X};
  case 3: return {Field::Y};
  default: return {Field::X, Field::Y};
  }
}

constexpr int kComplete = 5;

std::string stratum_name(int stratum) {
  static constexpr std::array<std::string_view, 6> kNames = {"kind", "color", "x", "y", "xy", "complete"};
  return std::string(kNames[static_cast<std::size_t>(stratum)]);
}

bool omits_coordinates(int stratum) { return stratum >= 2; }

std::string sentence(const PartialPlacementSpec &s) { return grammar::render(ParsedItem{s}); }

std::vector<TaskCase> task_i(std::uint32_t seed) {
  Draw d(seed);
  std::vector<TaskCase> out;
  for (int i = 0; i < 20; ++i) {
    const TemplateId tmpl = i % 2 == 0 ? TemplateId::Absolute : TemplateId::Relative;
    const PartKind kind = d.kind();
    const Color color = d.color();
    PartialPlacementSpec s = tmpl == TemplateId::Absolute ? absolute_spec(d, kind, color) : relative_spec(d, kind, color);
    TaskCase c;
    c.task = TaskId::I;
    c.id = "i-" + std::to_string(i + 1);
    c.turns = {grammar::generate_instruction(s, tmpl).value()};
    c.parts = {{grammar::restrict_to(s, tmpl), ground_action(s), {}}};
    c.meta["template"] = std::string(grammar::template_name(tmpl));
    out.push_back(std::move(c));
  }
  return out;
}

// Second part placed relative to the first; first must be a single cell.
GoldPart dependent_part(Draw &d, const PlaceAction &first, RelationKind rel, AnchorRef ref) {
  PartialPlacementSpec s;
  s.kind = d.kind(false);
  s.color = d.color();
  s.relation = DependentRelation{rel, std::move(ref)};
  Cell target = first.anchor + grammar::relation_offset(rel);
  if (rel != RelationKind::OnTop) target.z = 1;
  return {s, {*s.kind, *s.color, target}, {}};
}

// First-part coordinates that leave room for the relation's target cell.
void fit_for(Draw &d, PartialPlacementSpec &first, RelationKind rel) {
  const Cell off = grammar::relation_offset(rel);
  while (!in_bounds(*first.x + off.x) || !in_bounds(*first.y + off.y)) {
    first.x = d.coord();
    first.y = d.coord();
  }
}

GoldPart independent_part(Draw &d, const PlaceAction &first, bool relative, bool bridges) {
  for (;;) {
    const PartKind kind = d.kind(bridges);
    const Color color = d.color();
    PartialPlacementSpec s = relative ? relative_spec(d, kind, color) : absolute_spec(d, kind, color);
    PlaceAction a = ground_action(s);
    if (!overlaps_xy(a, first)) return {s, a, {}};
  }
}

std::vector<TaskCase> task_ii(std::uint32_t seed) {
  Draw d(seed);
  std::vector<TaskCase> out;
  for (int i = 0; i < 13; ++i) {
    const std::string category = i < 5 ? "independent" : i < 9 ? "on-top" : "adjacent";
    const bool dependent = category != "independent";
    const PartKind first_kind = d.kind(!dependent);
    const Color first_color = d.color();
    PartialPlacementSpec first = absolute_spec(d, first_kind, first_color);
    RelationKind rel = RelationKind::OnTop;
    if (category == "adjacent") {
      rel = kAdjacent[static_cast<std::size_t>(d.below(static_cast<int>(kAdjacent.size())))];
      fit_for(d, first, rel);
    }
    const PlaceAction first_action = ground_action(first);

    GoldPart second;
    if (dependent) {
      AnchorRef ref;
      if (i % 2 == 1) ref = AnchorRef{AnchorRef::Type::Description, first.kind, first.color};
      second = dependent_part(d, first_action, rel, ref);
    } else {
      second = independent_part(d, first_action, i % 2 == 1, true);
    }
    const TemplateId second_tmpl = dependent                ? TemplateId::Dependent
                                   : second.spec.relative ? TemplateId::Relative
                                                          : TemplateId::Absolute;

    TaskCase c;
    c.task = TaskId::II;
    c.id = "ii-" + std::to_string(i + 1);
    c.turns = {grammar::generate_instruction(first, TemplateId::Absolute).value() + " " +
               grammar::generate_instruction(second.spec, second_tmpl).value()};
    second.spec = grammar::restrict_to(second.spec, second_tmpl);
    c.parts = {{grammar::restrict_to(first, TemplateId::Absolute), first_action, {}}, second};
    c.meta["category"] = category;
    if (dependent) c.meta["relation"] = std::string(to_symbol(rel));
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<TaskCase> task_iv_single(std::uint32_t seed) {
  Draw d(seed);
  std::vector<TaskCase> out;
  // 27 part name, 27 color, 27 coordinates split 9 column / 9 row / 9 both.
  std::vector<int> strata;
  for (int i = 0; i < 27; ++i) strata.push_back(0);
  for (int i = 0; i < 27; ++i) strata.push_back(1);
  for (int i = 0; i < 27; ++i) strata.push_back(2 + i / 9);
  for (std::size_t i = 0; i < strata.size(); ++i) {
    const int stratum = strata[i];
    const bool coords = omits_coordinates(stratum);
    const TemplateId tmpl = !coords && i % 3 == 2 ? TemplateId::Relative : TemplateId::Absolute;
    const PartKind kind = d.kind(!coords);
    const Color color = d.color();
    PartialPlacementSpec full =
        tmpl == TemplateId::Absolute ? absolute_spec(d, kind, color) : relative_spec(d, kind, color);
    const auto fields = stratum_fields(stratum);
    const PartialPlacementSpec given = omit(grammar::restrict_to(full, tmpl), fields);

    TaskCase c;
    c.task = TaskId::IVSingle;
    c.id = "iv-single-" + std::to_string(i + 1);
    c.turns = {sentence(given)};
    c.parts = {{given, ground_action(full), fields}};
    c.meta["template"] = std::string(grammar::template_name(tmpl));
    c.meta["stratum"] = stratum_name(stratum);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<TaskCase> task_iv_two(std::uint32_t seed) {
  Draw d(seed);
  std::vector<TaskCase> out;
  // 40 with the first part fully specified, 73 with the second, 89 with neither.
  int next_stratum = 0;
  auto take = [&next_stratum] {
    const int s = next_stratum;
    next_stratum = (next_stratum + 1) % 5;
    return s;
  };
  for (int i = 0; i < 202; ++i) {
    const bool first_complete = i < 40;
    const bool second_complete = i >= 40 && i < 113;
    const int first_stratum = first_complete ? kComplete : take();
    const int second_stratum = second_complete ? kComplete : take();

    const bool second_coords = second_stratum != kComplete && omits_coordinates(second_stratum);
    const bool first_coords = first_stratum != kComplete && omits_coordinates(first_stratum);
    const bool dependent = !second_coords && i % 3 == 0;
    const RelationKind rel =
        i % 2 == 0 ? RelationKind::OnTop : kAdjacent[static_cast<std::size_t>(d.below(static_cast<int>(kAdjacent.size())))];

    const PartKind first_kind = d.kind(!dependent && !first_coords);
    const Color first_color = d.color();
    PartialPlacementSpec first = absolute_spec(d, first_kind, first_color);
    if (dependent) fit_for(d, first, rel);
    const PlaceAction first_action = ground_action(first);
    GoldPart second = dependent ? dependent_part(d, first_action, rel, AnchorRef{})
                                : independent_part(d, first_action, false, !second_coords);
    const TemplateId second_tmpl = dependent ? TemplateId::Dependent : TemplateId::Absolute;

    GoldPart one{grammar::restrict_to(first, TemplateId::Absolute), first_action, {}};
    if (first_stratum != kComplete) {
      one.omitted = stratum_fields(first_stratum);
      one.spec = omit(one.spec, one.omitted);
    }
    second.spec = grammar::restrict_to(second.spec, second_tmpl);
    if (second_stratum != kComplete) {
      second.omitted = stratum_fields(second_stratum);
      second.spec = omit(second.spec, second.omitted);
    }

    TaskCase c;
    c.task = TaskId::IVTwo;
    c.id = "iv-two-" + std::to_string(i + 1);
    c.turns = {sentence(one.spec) + " " + sentence(second.spec)};
    c.parts = {one, second};
    c.meta["first"] = stratum_name(first_stratum);
    c.meta["second"] = stratum_name(second_stratum);
    c.meta["category"] = dependent ? std::string(to_symbol(rel)) : "independent";
    out.push_back(std::move(c));
  }
  return out;
}

Result<json> read_fixture(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) return make_error(Errc::FixtureMissing, "fixture not found: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    return make_error(Errc::FixtureMissing, "fixture " + path.string() + " is not valid JSON: " + e.what());
  }
}

Result<PlaceAction> read_add(const json &j) {
  auto kind = part_from_symbol(j.at("part").get<std::string>());
  auto color = color_from_symbol(j.at("color").get<std::string>());
  if (!kind || !color) return make_error(Errc::FixtureMissing, "fixture part has an unknown part or color");
  return PlaceAction{*kind, *color, {j.at("x").get<int>(), j.at("y").get<int>(), j.at("z").get<int>()}};
}

Result<std::vector<PlaceAction>> read_adds(const json &arr) {
  std::vector<PlaceAction> out;
  for (const auto &a : arr) {
    auto action = read_add(a);
    if (!action) return action.error();
    out.push_back(action.value());
  }
  return out;
}

Result<TaskCase> shape_case(TaskId task, const std::filesystem::path &path) {
  auto doc = read_fixture(path);
  if (!doc) return doc.error();
  const json &j = doc.value();
  try {
    TaskCase c;
    c.task = task;
    c.id = j.at("name").get<std::string>();
    for (const auto &t : j.at("turns")) {
      GoldTurn turn{t.at("text").get<std::string>(), t.value("scored", true), {}};
      auto adds = read_adds(t.at("adds"));
      if (!adds) return adds.error();
      turn.adds = std::move(adds).value();
      c.turns.push_back(turn.text);
      c.script.push_back(std::move(turn));
    }
    c.meta["parts"] = std::to_string(j.at("parts").get<int>());
    if (task == TaskId::III) c.floor = j.at("floor").get<double>();
    if (task == TaskId::V) {
      c.name_turn = j.at("name_turn").get<std::size_t>();
      c.recall_turn = j.at("recall_turn").get<std::size_t>();
      auto original = read_adds(j.at("original"));
      if (!original) return original.error();
      c.original = std::move(original).value();
    }
    return c;
  } catch (const json::exception &e) {
    return make_error(Errc::FixtureMissing, "fixture " + path.string() + " is malformed: " + e.what());
  }
}

Result<std::vector<TaskCase>> toolbench(const std::filesystem::path &path) {
  auto doc = read_fixture(path);
  if (!doc) return doc.error();
  std::vector<TaskCase> out;
  try {
    for (const auto &j : doc.value().at("cases")) {
      TaskCase c;
      c.task = TaskId::Toolbench;
      c.id = j.at("id").get<std::string>();
      c.turns = {j.at("instruction").get<std::string>()};
      for (const auto &w : j.at("workflows")) {
        ToolbenchWorkflow wf{w.at("name").get<std::string>(), {}, {}};
        for (const auto &s : w.at("slots")) wf.slots.emplace_back(s.at("name"), s.at("role"));
        for (const auto &a : w.at("example")) wf.example.push_back(a);
        c.workflows.push_back(std::move(wf));
      }
      for (const auto &n : j.at("new_information")) {
        ToolbenchInfo info{n.at("workflow").get<std::string>(), {}};
        for (const auto &[k, v] : n.at("bindings").items()) info.bindings[k] = v;
        c.new_information.push_back(std::move(info));
      }
      for (const auto &g : j.at("gold")) {
        c.gold_calls.emplace_back(g.at("name").get<std::string>(), g.at("args").get<std::vector<json>>());
      }
      out.push_back(std::move(c));
    }
  } catch (const json::exception &e) {
    return make_error(Errc::FixtureMissing, "fixture " + path.string() + " is malformed: " + e.what());
  }
  return out;
}

ordered_json action_json(const PlaceAction &a) { return wire::action_to_json(Action{a}); }

} // namespace

std::string_view task_name(TaskId task) {
  switch (task) {
  case TaskId::I: return "i";
  case TaskId::II: return "ii";
  case TaskId::III: return "iii";
  case TaskId::IVSingle: return "iv-single";
  case TaskId::IVTwo: return "iv-two";
  case TaskId::V: return "v";
  case TaskId::Toolbench: return "toolbench";
  }
  return "?";
}

std::optional<TaskId> task_from_name(std::string_view name) {
  for (TaskId t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

ordered_json TaskCase::to_json() const {
  ordered_json j;
  j["task"] = std::string(task_name(task));
  j["id"] = id;
  j["text"] = text::join(turns, "\n");
  j["turns"] = turns;
  ordered_json gold = ordered_json::array();
  if (!parts.empty()) {
    for (const auto &p : parts) {
      ordered_json g = grammar::spec_to_json(p.spec);
      g["action"] = action_json(p.action);
      g["omitted"] = ordered_json::array();
      for (Field f : p.omitted) g["omitted"].push_back(std::string(field_name(f)));
      gold.push_back(std::move(g));
    }
  } else if (!script.empty()) {
    for (const auto &t : script) {
      ordered_json adds = ordered_json::array();
      for (const auto &a : t.adds) adds.push_back(action_json(a));
      gold.push_back({{"text", t.text}, {"scored", t.scored}, {"adds", adds}});
    }
  } else {
    for (const auto &[name, args] : gold_calls) gold.push_back({{"name", name}, {"args", args}});
  }
  j["gold"] = std::move(gold);
  ordered_json m = ordered_json::object();
  for (const auto &[k, v] : meta) m[k] = v;
  j["meta"] = std::move(m);
  return j;
}

std::filesystem::path default_fixture_dir() {
  if (const char *env = std::getenv("BLOCKWRIGHT_FIXTURES"); env != nullptr && *env != '\0') return env;
  return BLOCKWRIGHT_FIXTURE_DIR;
}

Result<std::vector<TaskCase>> generate_dataset(TaskId task, std::uint32_t seed,
                                               const std::filesystem::path &fixture_dir) {
  switch (task) {
  case TaskId::I: return task_i(seed);
  case TaskId::II: return task_ii(seed);
  case TaskId::IVSingle: return task_iv_single(seed);
  case TaskId::IVTwo: return task_iv_two(seed);
  case TaskId::III:
  case TaskId::V: {
    std::vector<TaskCase> out;
    const bool scripts = task == TaskId::III;
    const auto dir = fixture_dir / (scripts ? "task_iii" : "task_v");
    const auto &names = scripts ? std::vector<std::string_view>(kShapeScripts.begin(), kShapeScripts.end())
                                : std::vector<std::string_view>(kShapeDialogues.begin(), kShapeDialogues.end());
    for (auto name : names) {
      auto c = shape_case(task, dir / (std::string(name) + ".json"));
      if (!c) return c.error();
      out.push_back(std::move(c).value());
    }
    return out;
  }
  case TaskId::Toolbench: return toolbench(fixture_dir / "toolbench" / "workflows.json");
  }
  return make_error(Errc::InvalidArgument, "unknown task");
}

std::string dataset_jsonl(const std::vector<TaskCase> &cases) {
  std::string out;
  for (const auto &c : cases) out += c.to_json().dump() + "\n";
  return out;
}

std::string oracle_answer(const PlaceAction &gold, Field field) {
  switch (field) {
  case Field::Kind: {
    const std::string name(display_name(gold.kind));
    return (std::string_view("aeiou").find(name.front()) != std::string_view::npos ? "an " : "a ") + name;
  }
  case Field::Color: return std::string(to_symbol(gold.color));
  case Field::X: return "the " + text::ordinal(gold.anchor.x) + " column";
  case Field::Y: return "the " + text::ordinal(gold.anchor.y) + " row";
  case Field::Z: return "height " + std::to_string(gold.anchor.z);
  default: return {};
  }
}

} // namespace blockwright::eval
