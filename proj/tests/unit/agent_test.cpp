#include <gtest/gtest.h>

#include <random>

#include "blockwright/agent/pipeline.hpp"
#include "blockwright/common/text.hpp"
#include "blockwright/grammar/generator.hpp"
#include "blockwright/grid/wire.hpp"
#include "blockwright/memory/shape_graph.hpp"
#include "oracles/oracles.hpp"

using namespace blockwright;
using namespace blockwright::agent;

namespace {

std::unique_ptr<Agent> make_agent(std::shared_ptr<memory::ShapeStore> shapes = nullptr) {
  return std::make_unique<Agent>(std::make_shared<llm::DeterministicBackend>(), std::move(shapes));
}

std::vector<PlaceAction> places(const TurnOutcome &o) {
  std::vector<PlaceAction> out;
  if (const auto *e = std::get_if<Execute>(&o)) {
    for (const auto &a : e->program.actions) out.push_back(std::get<PlaceAction>(a));
  }
  return out;
}

std::string describe(const TurnOutcome &o) { return outcome_to_json(o).dump(); }

PartialPlacementSpec spec_at(std::optional<PartKind> k, std::optional<Color> c, std::optional<int> x,
                             std::optional<int> y) {
  PartialPlacementSpec s;
  s.kind = k;
  s.color = c;
  s.x = x;
  s.y = y;
  return s;
}

const std::vector<std::string> kSample = {
    "Can you place a blue screw at row 4 column 5 height 1",
    "Place a red screw next to the blue screw, and put a red screw on top.",
    "This is what I call a C15",
    "Now make me another C15 at the eighth row and ninth column",
};

} // namespace

TEST(Locate, NextToBlueScrew) {
  GridState g = place(GridState{}, PartKind::Screw, Color::Blue, {5, 4, 1}).value();
  PartialPlacementSpec s = spec_at(PartKind::Screw, Color::Red, std::nullopt, std::nullopt);
  s.relation = DependentRelation{RelationKind::NextTo, {AnchorRef::Type::Description, PartKind::Screw, Color::Blue}};
  auto r = locate(s, {&g, {}});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value().x, 6);
  EXPECT_EQ(r.value().y, 4);
  EXPECT_EQ(r.value().z, 1);
  EXPECT_EQ(r.value().source(Field::X), Source::Locator);
}

TEST(Locate, GravityOnEmptyGrid) {
  GridState g;
  auto r = locate(spec_at(PartKind::Nut, Color::Red, 5, 4), {&g, {}});
  EXPECT_EQ(r.value().z, 1);
}

TEST(Locate, MiddleLabel) {
  GridState g;
  PartialPlacementSpec s = spec_at(PartKind::Nut, Color::Red, std::nullopt, std::nullopt);
  s.relative = RelativeLabel::Middle;
  auto r = locate(s, {&g, {}});
  EXPECT_EQ(r.value().x, 8);
  EXPECT_EQ(r.value().y, 8);
  EXPECT_EQ(r.value().z, 1);
}

TEST(Locate, GravityMatchesColumnHeight) {
  std::mt19937 rng(5);
  for (int round = 0; round < 200; ++round) {
    GridState g;
    for (const auto &p : oracle::random_structure(rng, 10, 4, false)) {
      g = place(g, p.kind, p.color, p.anchor).value();
    }
    const int x = 1 + static_cast<int>(rng() % 4), y = 1 + static_cast<int>(rng() % 4);
    int top = 0;
    for (const auto &[id, p] : g.parts()) {
      for (const auto &c : oracle::cells_of(p.kind, p.anchor)) {
        if (c.x == x && c.y == y) top = std::max(top, c.z);
      }
    }
    auto r = locate(spec_at(PartKind::Nut, Color::Red, x, y), {&g, {}});
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.value().z, top + 1);
  }
}

TEST(Locate, MissingAnchorIsAmbiguous) {
  GridState g;
  PartialPlacementSpec s = spec_at(PartKind::Nut, Color::Red, std::nullopt, std::nullopt);
  s.relation = DependentRelation{RelationKind::OnTop, {AnchorRef::Type::Description, PartKind::Bolt, std::nullopt}};
  auto r = locate(s, {&g, {}});
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, Errc::AmbiguousAnchor);
}

TEST(Locate, MostRecentMatchWins) {
  GridState g = place(GridState{}, PartKind::Screw, Color::Blue, {2, 2, 1}).value();
  g = place(g, PartKind::Screw, Color::Blue, {9, 9, 1}).value();
  PartialPlacementSpec s = spec_at(PartKind::Nut, Color::Red, std::nullopt, std::nullopt);
  s.relation = DependentRelation{RelationKind::OnTop, {AnchorRef::Type::Description, PartKind::Screw, Color::Blue}};
  auto r = locate(s, {&g, {}});
  EXPECT_EQ(r.value().x, 9);
  EXPECT_EQ(r.value().z, 2);
}

TEST(Build, UnknownShape) {
  memory::ShapeStore store;
  TurnItem item;
  item.recall = RecallCommand{"Z99", {}, {}, {}, {}};
  auto r = build(item, store, GridState{});
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, Errc::UnknownShape);
}

TEST(Build, PlainSpecPassesThrough) {
  memory::ShapeStore store;
  TurnItem item{spec_at(PartKind::Washer, Color::Magenta, 2, 2), std::nullopt};
  auto r = build(item, store, GridState{});
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.value().parts.size(), 1u);
  EXPECT_EQ(r.value().parts[0], item.spec);
}

TEST(Clarification, KindQuestionTemplate) {
  std::vector<TurnItem> items{{spec_at(std::nullopt, Color::Blue, 3, 3), std::nullopt}};
  auto q = next_clarification(items);
  ASSERT_TRUE(q);
  EXPECT_EQ(question_text(items, *q), "Which part should I place at column 3, row 3?");
}

TEST(Clarification, FullySpecifiedAsksNothing) {
  std::vector<TurnItem> items{{spec_at(PartKind::Nut, Color::Blue, 3, 3), std::nullopt}};
  EXPECT_FALSE(next_clarification(items));
}

TEST(Clarification, SecondSpecOnlyAfterFirst) {
  std::vector<TurnItem> items{{spec_at(PartKind::Nut, std::nullopt, 3, 3), std::nullopt},
                              {spec_at(PartKind::Nut, std::nullopt, 4, 3), std::nullopt}};
  auto q = next_clarification(items);
  EXPECT_EQ(*q, (PendingField{0, Field::Color}));
  EXPECT_EQ(question_text(items, *q), "Part 1: What color should the nut be?");
  items[0].spec.color = Color::Red;
  q = next_clarification(items);
  EXPECT_EQ(*q, (PendingField{1, Field::Color}));
}

TEST(MergeAnswer, FillsOnlyTarget) {
  ClarificationState st;
  st.asked["q1"] = {0, Field::Color};
  st.pending = {{0, Field::Color}};
  std::vector<PartialPlacementSpec> specs{spec_at(PartKind::Nut, std::nullopt, 2, 2)};
  const auto before = specs[0];
  ASSERT_TRUE(merge_answer(st, "q1", "red", specs).ok());
  EXPECT_EQ(specs[0].color, Color::Red);
  EXPECT_EQ(specs[0].source(Field::Color), Source::Answer);
  auto expected = before;
  expected.color = Color::Red;
  EXPECT_EQ(specs[0], expected);
  EXPECT_TRUE(st.pending.empty());
}

TEST(MergeAnswer, ColumnPhrase) {
  ClarificationState st;
  st.asked["q1"] = {0, Field::X};
  std::vector<PartialPlacementSpec> specs{spec_at(PartKind::Nut, Color::Red, std::nullopt, 2)};
  ASSERT_TRUE(merge_answer(st, "q1", "the 7th column", specs).ok());
  EXPECT_EQ(specs[0].x, 7);
}

TEST(MergeAnswer, ColorForKindIsUnusable) {
  ClarificationState st;
  st.asked["q1"] = {0, Field::Kind};
  std::vector<PartialPlacementSpec> specs{spec_at(std::nullopt, Color::Red, 1, 2)};
  auto r = merge_answer(st, "q1", "purple", specs);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, Errc::UnusableAnswer);
  EXPECT_FALSE(specs[0].kind);
}

TEST(MergeAnswer, UnknownQuestion) {
  ClarificationState st;
  std::vector<PartialPlacementSpec> specs{spec_at(std::nullopt, Color::Red, 1, 2)};
  EXPECT_FALSE(merge_answer(st, "q9", "nut", specs).ok());
}

TEST(Provenance, UnsourcedFieldRejected) {
  auto s = spec_at(PartKind::Nut, Color::Red, 1, 1);
  s.z = 1;
  EXPECT_FALSE(check_provenance({s}).ok());
  for (Field f : {Field::Kind, Field::Color, Field::X, Field::Y, Field::Z}) s.set_source(f, Source::Utterance);
  EXPECT_TRUE(check_provenance({s}).ok());
}

TEST(ProcessTurn, SingleBlueScrew) {
  auto a = make_agent();
  auto o = a->process_turn("Place a blue screw at the 5th column, 4th row.");
  auto p = places(o);
  ASSERT_EQ(p.size(), 1u) << describe(o);
  EXPECT_EQ(p[0], (PlaceAction{PartKind::Screw, Color::Blue, {5, 4, 1}}));
  EXPECT_EQ(a->grid().parts().size(), 1u);
}

TEST(ProcessTurn, MissingColorAsksThenExecutes) {
  auto a = make_agent();
  auto o = a->process_turn("Place a nut at the 2nd column, 2nd row.");
  ASSERT_TRUE(std::holds_alternative<Clarify>(o)) << describe(o);
  EXPECT_EQ(std::get<Clarify>(o).question, "What color should the nut be?");
  EXPECT_EQ(std::get<Clarify>(o).id, "q1");
  EXPECT_TRUE(a->awaiting_answer());
  EXPECT_TRUE(a->grid().parts().empty());
  o = a->process_turn("green");
  auto p = places(o);
  ASSERT_EQ(p.size(), 1u) << describe(o);
  EXPECT_EQ(p[0], (PlaceAction{PartKind::Nut, Color::Green, {2, 2, 1}}));
  EXPECT_FALSE(a->awaiting_answer());
}

TEST(ProcessTurn, ReasksThreeTimesThenFails) {
  auto a = make_agent();
  auto o = a->process_turn("Place a red part at the 2nd column, 2nd row.");
  ASSERT_TRUE(std::holds_alternative<Clarify>(o)) << describe(o);
  const std::string id = std::get<Clarify>(o).id;
  for (int i = 0; i < kMaxReasks; ++i) {
    o = a->process_turn("purple");
    ASSERT_TRUE(std::holds_alternative<Clarify>(o)) << describe(o);
    EXPECT_EQ(std::get<Clarify>(o).id, id);
  }
  o = a->process_turn("purple");
  ASSERT_TRUE(std::holds_alternative<Failed>(o));
  EXPECT_EQ(std::get<Failed>(o).error.code, Errc::UnusableAnswer);
  EXPECT_FALSE(a->awaiting_answer());
}

TEST(ProcessTurn, QuestionsBoundedByNullFields) {
  auto a = make_agent();
  auto o = a->process_turn("Place a part.");
  int questions = 0;
  const std::vector<std::string> answers = {"a nut", "red", "the 3rd column", "the 4th row"};
  while (std::holds_alternative<Clarify>(o) && questions < 10) {
    o = a->process_turn(answers.at(questions++));
  }
  EXPECT_EQ(questions, 4);
  auto p = places(o);
  ASSERT_EQ(p.size(), 1u) << describe(o);
  EXPECT_EQ(p[0], (PlaceAction{PartKind::Nut, Color::Red, {3, 4, 1}}));
}

TEST(ProcessTurn, TwoPartsAskedInOrder) {
  auto a = make_agent();
  auto o = a->process_turn("Place a nut at the 2nd column, 2nd row, and place a blue washer on top of it.");
  ASSERT_TRUE(std::holds_alternative<Clarify>(o)) << describe(o);
  EXPECT_EQ(std::get<Clarify>(o).question, "Part 1: What color should the nut be?");
  o = a->process_turn("yellow");
  auto p = places(o);
  ASSERT_EQ(p.size(), 2u) << describe(o);
  EXPECT_EQ(p[1], (PlaceAction{PartKind::Washer, Color::Blue, {2, 2, 2}}));
}

TEST(ProcessTurn, FailureKeepsGrid) {
  auto a = make_agent();
  (void)a->process_turn("Place a blue screw at the 5th column, 4th row.");
  const std::string before = wire::snapshot_string(a->grid());
  auto o = a->process_turn("Place a red nut at the 1st column, 1st row, and place a red nut at the 5th column, 4th row, height 1.");
  ASSERT_TRUE(std::holds_alternative<Failed>(o)) << describe(o);
  EXPECT_EQ(wire::snapshot_string(a->grid()), before);
}

TEST(ProcessTurn, UnparseableIsError) {
  auto a = make_agent();
  auto o = a->process_turn("sing me a song");
  ASSERT_TRUE(std::holds_alternative<Failed>(o));
  EXPECT_EQ(std::get<Failed>(o).error.code, Errc::Unparseable);
}

TEST(ProcessTurn, SampleDialogueStoresAndRecalls) {
  auto shapes = std::make_shared<memory::ShapeStore>();
  auto a = make_agent(shapes);
  auto o = a->process_turn(kSample[0]);
  EXPECT_EQ(places(o), (std::vector<PlaceAction>{{PartKind::Screw, Color::Blue, {5, 4, 1}}})) << describe(o);
  o = a->process_turn(kSample[1]);
  EXPECT_EQ(places(o), (std::vector<PlaceAction>{{PartKind::Screw, Color::Red, {6, 4, 1}},
                                                 {PartKind::Screw, Color::Red, {6, 4, 2}}}))
      << describe(o);
  o = a->process_turn(kSample[2]);
  ASSERT_TRUE(std::holds_alternative<Stored>(o)) << describe(o);
  EXPECT_EQ(std::get<Stored>(o).name, "C15");
  EXPECT_EQ(std::get<Stored>(o).parts, 3u);
  o = a->process_turn(kSample[3]);
  auto p = places(o);
  ASSERT_EQ(p.size(), 3u) << describe(o);
  EXPECT_EQ(p[0], (PlaceAction{PartKind::Screw, Color::Blue, {9, 8, 1}}));

  std::vector<PlacedPart> original, copy;
  for (const auto &[id, part] : a->grid().parts()) (id <= 3 ? original : copy).push_back(part);
  EXPECT_TRUE(memory::shapes_equivalent(original, copy));
}

TEST(ProcessTurn, RecallUnknownShapeAsks) {
  auto a = make_agent();
  auto o = a->process_turn("Build another Z99 at the 3rd column, 3rd row.");
  ASSERT_TRUE(std::holds_alternative<Clarify>(o)) << describe(o);
  EXPECT_FALSE(a->awaiting_answer());
}

TEST(ProcessTurn, RecallWithOverrides) {
  auto a = make_agent();
  for (const auto &line : std::vector<std::string>(kSample.begin(), kSample.begin() + 3)) (void)a->process_turn(line);
  auto o = a->process_turn("Build another C15 at the 10th column, 10th row in green.");
  auto p = places(o);
  ASSERT_EQ(p.size(), 3u) << describe(o);
  for (const auto &x : p) EXPECT_EQ(x.color, Color::Green);
}

TEST(Replay, ReproducesSnapshot) {
  auto a = make_agent();
  for (const auto &line : kSample) (void)a->process_turn(line);
  (void)a->process_turn("Place a nut at the 2nd column, 2nd row.");
  (void)a->process_turn("red");
  const std::string log = a->dialogue_jsonl();
  auto b = replay_dialogue(log, std::make_shared<llm::DeterministicBackend>(), nullptr);
  ASSERT_TRUE(b.ok()) << b.error().to_string();
  EXPECT_EQ(wire::snapshot_string(b.value()->grid()), wire::snapshot_string(a->grid()));
  EXPECT_EQ(b.value()->dialogue_jsonl(), log);
}

TEST(Replay, EmptyLogEmptyGrid) {
  auto b = replay_dialogue("", std::make_shared<llm::DeterministicBackend>(), nullptr);
  ASSERT_TRUE(b.ok());
  EXPECT_TRUE(b.value()->grid().parts().empty());
}

TEST(Replay, TruncatedLogNamesLine) {
  auto a = make_agent();
  (void)a->process_turn(kSample[0]);
  (void)a->process_turn(kSample[1]);
  std::string log = a->dialogue_jsonl();
  log = log.substr(0, log.size() - 20);
  auto b = replay_dialogue(log, std::make_shared<llm::DeterministicBackend>(), nullptr);
  ASSERT_FALSE(b.ok());
  EXPECT_EQ(b.error().code, Errc::CorruptLog);
  EXPECT_EQ(b.error().detail, 4);
}

TEST(Dialogue, LogShape) {
  auto a = make_agent();
  (void)a->process_turn("Place a blue screw at the 5th column, 4th row.");
  const auto log = a->dialogue_jsonl();
  const auto first = nlohmann::json::parse(log.substr(0, log.find('\n')));
  EXPECT_EQ(first["role"], "architect");
  EXPECT_TRUE(first["outcome"].is_null());
  const auto second = nlohmann::json::parse(log.substr(log.find('\n') + 1));
  EXPECT_EQ(second["role"], "system");
  EXPECT_EQ(second["outcome"]["type"], "execute");
}

// Randomized specs rendered to text: the executed parts carry exactly the
// stated values, and every omitted field is asked about once.
TEST(ProcessTurn, RandomUnderspecifiedNeverInvents) {
  std::mt19937 rng(23);
  for (int round = 0; round < 300; ++round) {
    PartialPlacementSpec gold = spec_at(oracle::random_kind(rng, false), oracle::random_color(rng),
                                        1 + static_cast<int>(rng() % 16), 1 + static_cast<int>(rng() % 16));
    PartialPlacementSpec given = gold;
    const Field omit = kQuestionOrder[rng() % 4];
    given.clear(omit);
    if (omit == Field::X || omit == Field::Y) {
      given.clear(Field::X);
      given.clear(Field::Y);
    }
    auto a = make_agent();
    auto o = a->process_turn(grammar::render(ParsedItem{given}));
    std::vector<Field> asked;
    while (auto *q = std::get_if<Clarify>(&o)) {
      ASSERT_TRUE(q->target) << describe(o);
      asked.push_back(q->target->field);
      std::string reply;
      switch (q->target->field) {
      case Field::Kind: reply = std::string(display_name(*gold.kind)); break;
      case Field::Color: reply = std::string(to_symbol(*gold.color)); break;
      case Field::X: reply = "the " + text::ordinal(*gold.x) + " column"; break;
      case Field::Y: reply = "the " + text::ordinal(*gold.y) + " row"; break;
      default: FAIL();
      }
      o = a->process_turn(reply);
      ASSERT_LE(asked.size(), 2u);
    }
    auto p = places(o);
    ASSERT_EQ(p.size(), 1u) << describe(o);
    EXPECT_EQ(p[0], (PlaceAction{*gold.kind, *gold.color, {*gold.x, *gold.y, 1}}));
    EXPECT_EQ(asked.front(), omit == Field::Y ? Field::X : omit);
    const auto &turn = a->turns().back();
    const auto &parsed = std::get<PartialPlacementSpec>(turn.parsed.at(0));
    EXPECT_FALSE(parsed.has(omit));
  }
}
