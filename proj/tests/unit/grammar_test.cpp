#include <gtest/gtest.h>

#include <random>

#include "blockwright/common/text.hpp"
#include "blockwright/grammar/generator.hpp"
#include "blockwright/grammar/lexicon.hpp"
#include "blockwright/grammar/parser.hpp"
#include "blockwright/grammar/spec_json.hpp"
#include "oracles/oracles.hpp"

using namespace blockwright;
using namespace blockwright::grammar;

namespace {

std::vector<ParsedItem> parse_ok(std::string_view text) {
  auto r = parse_instruction(text);
  EXPECT_TRUE(r.ok()) << text << ": " << (r.ok() ? "" : r.error().to_string());
  return r.ok() ? r.value() : std::vector<ParsedItem>{};
}

PartialPlacementSpec only_spec(std::string_view text) {
  auto items = parse_ok(text);
  EXPECT_EQ(items.size(), 1u) << text;
  if (items.empty() || !std::holds_alternative<PartialPlacementSpec>(items[0])) {
    ADD_FAILURE() << "no spec in " << text;
    return {};
  }
  return std::get<PartialPlacementSpec>(items[0]);
}

std::string dump(const std::vector<ParsedItem> &items) {
  std::string out;
  for (const auto &i : items) out += item_to_json(i).dump() + "\n";
  return out;
}

} // namespace

TEST(Text, Ordinals) {
  EXPECT_EQ(text::ordinal(1), "1st");
  EXPECT_EQ(text::ordinal(2), "2nd");
  EXPECT_EQ(text::ordinal(3), "3rd");
  EXPECT_EQ(text::ordinal(11), "11th");
  EXPECT_EQ(text::ordinal(12), "12th");
  EXPECT_EQ(text::ordinal(13), "13th");
  EXPECT_EQ(text::ordinal(16), "16th");
  EXPECT_EQ(text::parse_ordinal("fifth"), 5);
  EXPECT_EQ(text::parse_ordinal("5th"), 5);
  EXPECT_EQ(text::parse_ordinal("sixteenth"), 16);
  EXPECT_EQ(text::parse_ordinal("the"), std::nullopt);
}

TEST(Lexicon, RelativeTable) {
  EXPECT_EQ(resolve_relative(RelativeLabel::TopLeft), std::make_pair(1, 1));
  EXPECT_EQ(resolve_relative(RelativeLabel::Middle), std::make_pair(16 / 2, 16 / 2));
  EXPECT_EQ(resolve_relative(RelativeLabel::BottomRight), std::make_pair(16, 16));
  EXPECT_EQ(resolve_relative("top-right").value(), std::make_pair(16, 1));
  EXPECT_EQ(resolve_relative("center").value(), std::make_pair(8, 8));
  EXPECT_EQ(resolve_relative("upper-ish").error().code, Errc::UnknownLabel);
}

TEST(Parse, AbsoluteTemplate) {
  auto s = only_spec("Place a blue screw at the 5th column, 4th row.");
  EXPECT_EQ(s.kind, PartKind::Screw);
  EXPECT_EQ(s.color, Color::Blue);
  EXPECT_EQ(s.x, 5);
  EXPECT_EQ(s.y, 4);
  EXPECT_EQ(s.z, std::nullopt);
  EXPECT_EQ(s.source(Field::X), Source::Utterance);
}

TEST(Parse, TwoClausesWithRelations) {
  auto items = parse_ok("Place a red screw next to the blue screw, and put a red screw on top.");
  ASSERT_EQ(items.size(), 2u) << dump(items);
  const auto &a = std::get<PartialPlacementSpec>(items[0]);
  const auto &b = std::get<PartialPlacementSpec>(items[1]);
  EXPECT_EQ(a.kind, PartKind::Screw);
  EXPECT_EQ(a.color, Color::Red);
  ASSERT_TRUE(a.relation);
  EXPECT_EQ(a.relation->kind, RelationKind::NextTo);
  EXPECT_EQ(a.relation->target.type, AnchorRef::Type::Description);
  EXPECT_EQ(a.relation->target.kind, PartKind::Screw);
  EXPECT_EQ(a.relation->target.color, Color::Blue);
  ASSERT_TRUE(b.relation);
  EXPECT_EQ(b.relation->kind, RelationKind::OnTop);
  EXPECT_EQ(b.relation->target.type, AnchorRef::Type::Recent);
}

TEST(Parse, PronounLeavesKindNull) {
  auto s = only_spec("Place it at the top left of the board.");
  EXPECT_EQ(s.kind, std::nullopt);
  EXPECT_EQ(s.color, std::nullopt);
  EXPECT_EQ(s.relative, RelativeLabel::TopLeft);
}

TEST(Parse, RowColumnHeightNouns) {
  auto s = only_spec("place a blue screw at row 4 column 5 height 1");
  EXPECT_EQ(s.x, 5);
  EXPECT_EQ(s.y, 4);
  EXPECT_EQ(s.z, 1);
}

TEST(Parse, WordOrdinalsAndReorderedAxes) {
  auto s = only_spec("Now make me a green nut at the eighth row and ninth column.");
  EXPECT_EQ(s.x, 9);
  EXPECT_EQ(s.y, 8);
}

TEST(Parse, BridgeColumns) {
  auto s = only_spec("Place a red horizontal bridge at the 3rd and 4th columns, 2nd row.");
  EXPECT_EQ(s.kind, PartKind::HorizontalBridge);
  EXPECT_EQ(s.x, 3);
  EXPECT_EQ(s.x2, 4);
  EXPECT_EQ(s.y, 2);
}

TEST(Parse, CountedGroupExpands) {
  auto items = parse_ok("Place a horizontal row of four purple gaskets at the 2nd column, 3rd row.");
  ASSERT_EQ(items.size(), 4u);
  const auto &first = std::get<PartialPlacementSpec>(items[0]);
  EXPECT_EQ(first.x, 2);
  for (std::size_t i = 1; i < 4; ++i) {
    const auto &s = std::get<PartialPlacementSpec>(items[i]);
    EXPECT_EQ(s.kind, PartKind::Gasket);
    EXPECT_EQ(s.color, Color::Purple);
    ASSERT_TRUE(s.relation);
    EXPECT_EQ(s.relation->kind, RelationKind::RightOf);
  }
}

TEST(Parse, TowerIsStacked) {
  auto items = parse_ok("Build a tower made of three red nuts at the first column, second row.");
  ASSERT_EQ(items.size(), 3u);
  EXPECT_EQ(std::get<PartialPlacementSpec>(items[2]).relation->kind, RelationKind::OnTop);
}

TEST(Parse, NameCommand) {
  auto items = parse_ok("This is what I call a C15");
  ASSERT_EQ(items.size(), 1u);
  const auto &cmd = std::get<MemoryCommand>(items[0]);
  EXPECT_EQ(std::get<NameCommand>(cmd).name, "C15");
}

TEST(Parse, RecallWithOverrides) {
  auto items = parse_ok("Now make me another C15 at the eighth row and ninth column in green with bolts twice as big.");
  ASSERT_EQ(items.size(), 1u);
  const auto &recall = std::get<RecallCommand>(std::get<MemoryCommand>(items[0]));
  EXPECT_EQ(recall.name, "C15");
  EXPECT_EQ(recall.target.x, 9);
  EXPECT_EQ(recall.target.y, 8);
  EXPECT_EQ(recall.color, Color::Green);
  EXPECT_EQ(recall.part, PartKind::Bolt);
  ASSERT_TRUE(recall.size);
  EXPECT_EQ(recall.size->factor, 2);
}

TEST(Parse, Unparseable) {
  for (const char *text : {"", "hello there", "what is the weather", "Place a red nut at the 3rd column, 20th row.",
                           "Place a red nut next to it at the 3rd column."}) {
    auto r = parse_instruction(text);
    ASSERT_FALSE(r.ok()) << text;
    EXPECT_EQ(r.error().code, Errc::Unparseable);
  }
}

TEST(Parse, Pure) {
  const std::string text = "Place a red screw next to the blue screw, and put a red screw on top.";
  EXPECT_EQ(dump(parse_ok(text)), dump(parse_ok(text)));
}

TEST(Generate, AbsoluteTemplate) {
  PartialPlacementSpec s;
  s.kind = PartKind::Nut;
  s.color = Color::Red;
  s.x = 1;
  s.y = 2;
  EXPECT_EQ(generate_instruction(s, TemplateId::Absolute).value(),
            "Place a red nut at the 1st column, 2nd row.");
}

TEST(Generate, RelativeTemplate) {
  PartialPlacementSpec s;
  s.kind = PartKind::Gasket;
  s.color = Color::Purple;
  s.relative = RelativeLabel::Middle;
  EXPECT_EQ(generate_instruction(s, TemplateId::Relative).value(),
            "Place a purple gasket at the middle of the board.");
}

TEST(Generate, MissingField) {
  PartialPlacementSpec s;
  s.kind = PartKind::Nut;
  s.color = Color::Red;
  auto r = generate_instruction(s, TemplateId::Absolute);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, Errc::MissingField);
  EXPECT_EQ(r.error().message, "x");
}

TEST(Generate, TemplateRoundTripExhaustive) {
  // Every kind x color x a coordinate sample, through all three templates.
  const int coords[] = {1, 2, 3, 8, 11, 15};
  for (PartKind k : kAllPartKinds) {
    for (Color c : kAllColors) {
      for (int x : coords) {
        for (int y : coords) {
          PartialPlacementSpec s;
          s.kind = k;
          s.color = c;
          s.x = x;
          s.y = y;
          s.relative = static_cast<RelativeLabel>((x + y) % 9);
          s.relation = DependentRelation{static_cast<RelationKind>((x * y) % 6), AnchorRef{}};
          for (auto t : {TemplateId::Absolute, TemplateId::Relative, TemplateId::Dependent}) {
            auto text = generate_instruction(s, t);
            ASSERT_TRUE(text.ok());
            const auto back = only_spec(text.value());
            ASSERT_EQ(back, restrict_to(s, t)) << text.value();
          }
        }
      }
    }
  }
}

TEST(Generate, RandomRoundTrip) {
  std::mt19937 rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const auto s = oracle::random_spec(rng);
    const std::string text = render(ParsedItem{s});
    auto parsed = parse_instruction(text);
    ASSERT_TRUE(parsed.ok()) << text;
    ASSERT_EQ(parsed.value().size(), 1u) << text;
    ASSERT_EQ(std::get<PartialPlacementSpec>(parsed.value()[0]), s)
        << text << "\n" << spec_to_json(s).dump();
  }
}

TEST(Generate, NoInvention) {
  // Drop each field in turn; the parse must be null exactly there.
  std::mt19937 rng(77);
  for (int i = 0; i < 2000; ++i) {
    PartialPlacementSpec full;
    full.kind = oracle::random_kind(rng, false);
    full.color = oracle::random_color(rng);
    full.x = 1 + static_cast<int>(rng() % 16);
    full.y = 1 + static_cast<int>(rng() % 16);
    for (Field f : {Field::Kind, Field::Color, Field::X, Field::Y}) {
      PartialPlacementSpec partial = full;
      partial.clear(f);
      const auto back = only_spec(render(ParsedItem{partial}));
      for (Field g : {Field::Kind, Field::Color, Field::X, Field::Y}) {
        EXPECT_EQ(back.has(g), g != f);
      }
    }
  }
}

TEST(Generate, CommandRoundTrip) {
  RecallCommand recall;
  recall.name = "Moroccan Bridge";
  recall.target.x = 9;
  recall.target.y = 8;
  recall.color = Color::Orange;
  recall.part = PartKind::Washer;
  recall.size = SizeOverride{std::nullopt, std::array<int, 3>{4, 4, 1}};
  for (const ParsedItem item : {ParsedItem{MemoryCommand{recall}},
                                ParsedItem{MemoryCommand{NameCommand{"A20 tower"}}},
                                ParsedItem{MemoryCommand{NameCommand{"X34"}}}}) {
    const auto text = render(item);
    auto parsed = parse_ok(text);
    ASSERT_EQ(parsed.size(), 1u) << text;
    EXPECT_EQ(item_to_json(parsed[0]).dump(), item_to_json(item).dump()) << text;
  }
}

TEST(Fragments, Answers) {
  EXPECT_EQ(parse_color_answer("red"), Color::Red);
  EXPECT_EQ(parse_color_answer("make it red please"), Color::Red);
  EXPECT_EQ(parse_color_answer("red or blue"), std::nullopt);
  EXPECT_EQ(parse_part_answer("a nut"), PartKind::Nut);
  EXPECT_EQ(parse_part_answer("hex nut"), PartKind::HexNut);
  EXPECT_EQ(parse_part_answer("purple"), std::nullopt);
  EXPECT_EQ(parse_axis_answer("the 7th column", Field::X), 7);
  EXPECT_EQ(parse_axis_answer("7", Field::X), 7);
  EXPECT_EQ(parse_axis_answer("row 3", Field::Y), 3);
  EXPECT_EQ(parse_axis_answer("the 7th column", Field::Y), std::nullopt);
  EXPECT_EQ(parse_axis_answer("the 17th column", Field::X), std::nullopt);
}

TEST(Fragments, AxisAgreesWithFullParser) {
  for (int v = 1; v <= 16; ++v) {
    for (auto [field, noun] : {std::pair{Field::X, "column"}, std::pair{Field::Y, "row"}}) {
      const std::string answer = "the " + text::ordinal(v) + " " + noun;
      const auto full = only_spec("Place a red nut at " + answer + ".");
      EXPECT_EQ(parse_axis_answer(answer, field), field == Field::X ? full.x : full.y);
    }
  }
}

TEST(SpecJson, NullsExplicit) {
  PartialPlacementSpec s;
  s.kind = PartKind::Screw;
  EXPECT_EQ(spec_to_json(s).dump(),
            R"({"kind":"screw","color":null,"x":null,"y":null,"z":null,"x2":null,"y2":null,"relative":null,"relation":null})");
}

TEST(SpecJson, RoundTrip) {
  std::mt19937 rng(3);
  for (int i = 0; i < 1000; ++i) {
    auto s = oracle::random_spec(rng);
    s.set_source(Field::Kind, Source::Answer);
    auto back = spec_from_json(nlohmann::json::parse(spec_to_json(s, true).dump()));
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(back.value(), s);
    EXPECT_EQ(back.value().sources, s.sources);
  }
}
