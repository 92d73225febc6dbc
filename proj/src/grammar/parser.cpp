#include "blockwright/grammar/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <initializer_list>
#include <set>
#include <string>

#include "blockwright/common/text.hpp"
#include "blockwright/grid/cell.hpp"

namespace blockwright::grammar {

namespace {

struct Token {
  enum class Type { Word, Comma, Stop };
  Type type = Type::Word;
  std::string lower;
  std::string raw;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      out.push_back({Token::Type::Word, text::to_lower(current), current});
      current.clear();
    }
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || ch == '\'' || ch == '+' || ch == '_' || c >= 0x80) {
      current.push_back(ch);
    } else if (ch == ',' || ch == ';' || ch == ':') {
      flush();
      out.push_back({Token::Type::Comma, ",", ","});
    } else if (ch == '.' || ch == '!' || ch == '?') {
      flush();
      out.push_back({Token::Type::Stop, ".", "."});
    } else {
      flush();
    }
  }
  flush();
  return out;
}

enum class Axis { Column, Row, Height };

struct PositionParse {
  std::optional<int> x, y, z, x2, y2;
  std::optional<RelativeLabel> relative;

  bool merge(const PositionParse &o) {
    auto take = [](std::optional<int> &dst, const std::optional<int> &src) {
      if (!src) return true;
      if (dst) return false;
      dst = src;
      return true;
    };
    if (o.relative) {
      if (relative) return false;
      relative = o.relative;
    }
    return take(x, o.x) && take(y, o.y) && take(z, o.z) && take(x2, o.x2) && take(y2, o.y2);
  }
};

struct NounParse {
  std::optional<PartKind> kind; // empty for generic nouns ("piece", "one")
};

enum class GroupAxis { Row, Column, Tower };

struct ObjectParse {
  enum class Type { Pronoun, Part, Group, Recall };
  explicit ObjectParse(Type t) : type(t) {}
  Type type;
  std::optional<Color> color;
  std::optional<PartKind> kind;
  int count = 1;
  GroupAxis group = GroupAxis::Row;
  std::string name;
};

struct ClauseMods {
  PositionParse position;
  std::optional<DependentRelation> relation;
  std::optional<Color> color;
  std::optional<PartKind> part_override;
  std::optional<SizeOverride> size;
};

const std::set<std::string, std::less<>> kVerbs = {
    "place", "put",      "add",      "set",    "build", "make",   "create", "stack",
    "lay",   "construct", "recreate", "position", "drop", "insert", "draw",  "give"};

const std::set<std::string, std::less<>> kGenericNouns = {
    "part", "parts", "piece", "pieces", "one", "ones", "block", "blocks",
    "object", "objects", "thing", "things", "item", "items"};

const std::set<std::string, std::less<>> kNameStops = {
    "at", "on", "in", "with", "using", "made", "out", "next", "beside", "behind",
    "starting", "from", "twice", "double", "triple", "scaled", "to", "left", "right",
    "above", "onto", "near", "and", "that", "which", "but", "please"};

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::optional<std::vector<ParsedItem>> utterance() {
    std::vector<ParsedItem> items;
    bool prev_placement = false;
    while (true) {
      skip_separators();
      if (at_end()) {
        break;
      }
      auto clause = parse_clause(prev_placement);
      if (!clause) {
        return std::nullopt;
      }
      prev_placement = !clause->empty() &&
                       std::holds_alternative<PartialPlacementSpec>(clause->back());
      for (auto &item : *clause) {
        items.push_back(std::move(item));
      }
      if (!at_end() && !at_separator()) {
        return std::nullopt;
      }
    }
    if (items.empty()) {
      return std::nullopt;
    }
    return items;
  }

  // --- fragment entry points ------------------------------------------------

  std::optional<NounParse> lone_noun() {
    std::optional<NounParse> found;
    while (!at_end()) {
      const std::size_t save = pos_;
      if (auto noun = parse_part_noun(); noun && noun->kind) {
        if (found && found->kind != noun->kind) {
          return std::nullopt;
        }
        found = noun;
        continue;
      }
      pos_ = save + 1;
    }
    return found;
  }

  std::optional<Color> lone_color() {
    std::optional<Color> found;
    for (const Token &t : toks_) {
      if (auto c = color_from_symbol(t.lower)) {
        if (found && found != c) {
          return std::nullopt;
        }
        found = c;
      }
    }
    return found;
  }

  std::optional<int> lone_axis(Axis wanted) {
    skip_fillers();
    const std::size_t save = pos_;
    if (auto position = parse_position()) {
      skip_trailing();
      if (!at_end() || position->relative) {
        return std::nullopt;
      }
      std::optional<int> value;
      int filled = 0;
      for (auto [axis, v] : {std::pair{Axis::Column, position->x}, std::pair{Axis::Row, position->y},
                             std::pair{Axis::Height, position->z}}) {
        if (v) {
          ++filled;
          if (axis == wanted) value = v;
        }
      }
      if (filled != 1 || position->x2 || position->y2) {
        return std::nullopt;
      }
      return value;
    }
    pos_ = save;
    accept("the");
    std::optional<int> value;
    if (const Token *t = peek()) {
      value = text::parse_ordinal(t->lower);
      if (!value) value = text::parse_cardinal(t->lower);
    }
    if (!value) {
      return std::nullopt;
    }
    ++pos_;
    skip_trailing();
    if (!at_end()) {
      return std::nullopt;
    }
    return value;
  }

private:
  // --- token helpers --------------------------------------------------------

  bool at_end() const { return pos_ >= toks_.size(); }

  const Token *peek(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
  }

  bool is_word(std::string_view w, std::size_t ahead = 0) const {
    const Token *t = peek(ahead);
    return t != nullptr && t->type == Token::Type::Word && t->lower == w;
  }

  bool is_comma(std::size_t ahead = 0) const {
    const Token *t = peek(ahead);
    return t != nullptr && t->type == Token::Type::Comma;
  }

  bool accept(std::string_view w) {
    if (is_word(w)) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_seq(std::initializer_list<std::string_view> words) {
    std::size_t i = 0;
    for (auto w : words) {
      if (!is_word(w, i)) {
        return false;
      }
      ++i;
    }
    pos_ += i;
    return true;
  }

  bool accept_comma() {
    if (is_comma()) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool at_separator() const {
    const Token *t = peek();
    if (t == nullptr) return false;
    return t->type != Token::Type::Word || t->lower == "and" || t->lower == "then";
  }

  void skip_separators() {
    while (!at_end()) {
      const Token *t = peek();
      if (t->type != Token::Type::Word || t->lower == "and" || t->lower == "then") {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void skip_fillers() {
    while (accept("it's") || accept("its") || accept_seq({"it", "is"}) || accept("in") ||
           accept("on") || accept("at") || accept("use") || accept("make") || accept("it") ||
           accept("please") || accept("should") || accept("be")) {
    }
  }

  void skip_trailing() {
    while (!at_end() && (peek()->type != Token::Type::Word || is_word("please"))) {
      ++pos_;
    }
  }

  void skip_politeness() {
    bool progressed = true;
    while (progressed) {
      progressed = accept_seq({"can", "you"}) || accept_seq({"could", "you"}) ||
                   accept_seq({"would", "you"}) || accept_seq({"will", "you"}) ||
                   accept_seq({"i", "want", "you", "to"}) || accept_seq({"go", "ahead", "and"}) ||
                   accept("please") || accept("now") || accept("then") || accept("next") ||
                   accept("also") || accept("finally") || accept("lastly") || accept("ok") ||
                   accept("okay");
    }
  }

  bool accept_verb() {
    const Token *t = peek();
    if (t != nullptr && t->type == Token::Type::Word && kVerbs.count(t->lower) > 0) {
      ++pos_;
      if (!accept("me")) accept("us");
      accept("down");
      return true;
    }
    return false;
  }

  std::optional<Color> parse_color() {
    if (const Token *t = peek(); t != nullptr && t->type == Token::Type::Word) {
      if (auto c = color_from_symbol(t->lower)) {
        ++pos_;
        return c;
      }
    }
    return std::nullopt;
  }

  std::optional<int> parse_ordinal_token() {
    if (const Token *t = peek(); t != nullptr && t->type == Token::Type::Word) {
      if (auto v = text::parse_ordinal(t->lower)) {
        ++pos_;
        return v;
      }
    }
    return std::nullopt;
  }

  std::optional<int> parse_cardinal_token() {
    if (const Token *t = peek(); t != nullptr && t->type == Token::Type::Word) {
      if (auto v = text::parse_cardinal(t->lower)) {
        ++pos_;
        return v;
      }
    }
    return std::nullopt;
  }

  // --- nouns ----------------------------------------------------------------

  static bool noun_word(const Token *t, std::string_view stem) {
    if (t == nullptr || t->type != Token::Type::Word) return false;
    return t->lower == stem || t->lower == std::string(stem) + "s";
  }

  std::optional<NounParse> parse_part_noun() {
    const Token *a = peek();
    const Token *b = peek(1);
    if (a == nullptr || a->type != Token::Type::Word) {
      return std::nullopt;
    }
    const std::string &w = a->lower;
    if (w == "horizontal" && noun_word(b, "bridge")) {
      pos_ += 2;
      return NounParse{PartKind::HorizontalBridge};
    }
    if (w == "vertical" && noun_word(b, "bridge")) {
      pos_ += 2;
      return NounParse{PartKind::VerticalBridge};
    }
    if ((w == "hex" || w == "hexagonal") && noun_word(b, "nut")) {
      pos_ += 2;
      return NounParse{PartKind::HexNut};
    }
    if (w == "square" && noun_word(b, "nut")) {
      pos_ += 2;
      return NounParse{PartKind::SquareNut};
    }
    for (auto [stem, kind] : {std::pair{"screw", PartKind::Screw}, std::pair{"nut", PartKind::Nut},
                              std::pair{"washer", PartKind::Washer}, std::pair{"bolt", PartKind::Bolt},
                              std::pair{"gasket", PartKind::Gasket}}) {
      if (noun_word(a, stem)) {
        ++pos_;
        return NounParse{kind};
      }
    }
    if (kGenericNouns.count(w) > 0) {
      ++pos_;
      return NounParse{std::nullopt};
    }
    return std::nullopt;
  }

  // --- positions ------------------------------------------------------------

  std::optional<Axis> parse_axis_noun(bool plural_ok) {
    const Token *t = peek();
    if (t == nullptr || t->type != Token::Type::Word) return std::nullopt;
    const std::string &w = t->lower;
    std::optional<Axis> axis;
    if (w == "column" || (plural_ok && w == "columns")) axis = Axis::Column;
    else if (w == "row" || (plural_ok && w == "rows")) axis = Axis::Row;
    else if (w == "height" || w == "level" || w == "layer" || w == "floor") axis = Axis::Height;
    if (axis) ++pos_;
    return axis;
  }

  bool assign_axis(PositionParse &out, Axis axis, int first, std::optional<int> second) {
    auto set = [](std::optional<int> &dst, int v) {
      if (dst) return false;
      dst = v;
      return true;
    };
    switch (axis) {
    case Axis::Column:
      return set(out.x, first) && (!second || set(out.x2, *second));
    case Axis::Row:
      return set(out.y, first) && (!second || set(out.y2, *second));
    case Axis::Height:
      return !second && set(out.z, first);
    }
    return false;
  }

  // One of "the 5th column", "the 3rd and 4th columns", "column 5", "height 1".
  bool parse_axis(PositionParse &out) {
    const std::size_t save = pos_;
    accept("the");
    if (auto first = parse_ordinal_token()) {
      std::optional<int> second;
      const std::size_t before_and = pos_;
      if (accept("and")) {
        accept("the");
        second = parse_ordinal_token();
        if (!second) pos_ = before_and;
      }
      if (auto axis = parse_axis_noun(second.has_value())) {
        if (assign_axis(out, *axis, *first, second)) {
          return true;
        }
      }
      pos_ = save;
      return false;
    }
    pos_ = save;
    if (auto axis = parse_axis_noun(false)) {
      if (auto value = parse_cardinal_token()) {
        if (assign_axis(out, *axis, *value, std::nullopt)) {
          return true;
        }
      }
    }
    pos_ = save;
    return false;
  }

  std::optional<RelativeLabel> parse_relative_label() {
    const std::size_t save = pos_;
    accept("the");
    auto word = [&](std::size_t ahead) -> std::string {
      const Token *t = peek(ahead);
      if (t == nullptr || t->type != Token::Type::Word) return {};
      if (t->lower == "center" || t->lower == "centre") return "middle";
      return t->lower;
    };
    static const std::set<std::string, std::less<>> kSides = {"top", "bottom", "left", "right"};
    const std::string a = word(0);
    const std::string b = word(1);
    std::optional<RelativeLabel> label;
    std::size_t used = 0;
    auto pair_label = [](const std::string &p, const std::string &q) -> std::optional<RelativeLabel> {
      auto has = [&](std::string_view s) { return p == s || q == s; };
      if (has("top") && has("left")) return RelativeLabel::TopLeft;
      if (has("top") && has("right")) return RelativeLabel::TopRight;
      if (has("bottom") && has("left")) return RelativeLabel::BottomLeft;
      if (has("bottom") && has("right")) return RelativeLabel::BottomRight;
      if (has("top") && has("middle")) return RelativeLabel::TopMiddle;
      if (has("bottom") && has("middle")) return RelativeLabel::BottomMiddle;
      if (has("left") && has("middle")) return RelativeLabel::LeftMiddle;
      if (has("right") && has("middle")) return RelativeLabel::RightMiddle;
      return std::nullopt;
    };
    if ((kSides.count(a) > 0 || a == "middle") && (kSides.count(b) > 0 || b == "middle") && a != b) {
      label = pair_label(a, b);
      used = 2;
    }
    if (!label && a == "middle") {
      label = RelativeLabel::Middle;
      used = 1;
    }
    if (!label) {
      pos_ = save;
      return std::nullopt;
    }
    pos_ += used;
    if (!accept("corner")) {
      if (!accept("side")) accept("area");
    }
    const std::size_t before_of = pos_;
    if (accept("of")) {
      accept("the");
      if (!accept("board") && !accept("grid")) {
        pos_ = before_of;
      }
    }
    return label;
  }

  std::optional<PositionParse> parse_position() {
    if (auto label = parse_relative_label()) {
      PositionParse out;
      out.relative = label;
      return out;
    }
    PositionParse out;
    if (!parse_axis(out)) {
      return std::nullopt;
    }
    while (true) {
      const std::size_t save = pos_;
      if (!accept_comma()) {
        accept("and");
      }
      if (!parse_axis(out)) {
        pos_ = save;
        break;
      }
    }
    return out;
  }

  // --- references -----------------------------------------------------------

  std::optional<AnchorRef> parse_ref() {
    const std::size_t save = pos_;
    if (accept("it") || accept("that") || accept("this") || accept("them")) {
      return AnchorRef{};
    }
    if (accept("the")) {
      if (accept("previous") || accept("last")) {
        if (!parse_part_noun()) {
          pos_ = save;
          return std::nullopt;
        }
        return AnchorRef{};
      }
      const auto color = parse_color();
      if (auto noun = parse_part_noun()) {
        if (!noun->kind && !color) {
          return AnchorRef{};
        }
        return AnchorRef{AnchorRef::Type::Description, noun->kind, color};
      }
    }
    pos_ = save;
    return std::nullopt;
  }

  // --- memory commands ------------------------------------------------------

  std::optional<std::string> parse_name_tokens() {
    accept("a") || accept("an") || accept("the");
    std::vector<std::string> words;
    while (!at_end() && peek()->type == Token::Type::Word) {
      words.push_back(peek()->raw);
      ++pos_;
    }
    while (words.size() > 1) {
      const std::string last = text::to_lower(words.back());
      if (last == "shape" || last == "structure" || last == "workflow" || last == "function") {
        words.pop_back();
      } else {
        break;
      }
    }
    if (words.empty()) {
      return std::nullopt;
    }
    return text::join(words, " ");
  }

  std::optional<ParsedItem> parse_name_command() {
    const std::size_t save = pos_;
    accept("ok") || accept("okay") || accept("now");
    bool matched = accept_seq({"this", "is", "what", "i", "call"}) ||
                   accept_seq({"this", "is", "called"}) || accept_seq({"this", "is", "named"});
    if (!matched && is_word("this") && is_word("is", 1) &&
        (is_word("a", 2) || is_word("an", 2))) {
      pos_ += 2;
      matched = true;
    }
    if (!matched) {
      matched = (accept_seq({"i", "call"}) || accept("call") || accept_seq({"let's", "call"}) ||
                 accept_seq({"lets", "call"}) || accept("name")) &&
                (accept("this") || accept("it"));
      if (!matched) {
        pos_ = save;
        matched = (accept("remember") || accept("save") || accept("store")) &&
                  (accept("this") || accept("it")) && accept("as");
      }
    }
    if (!matched) {
      pos_ = save;
      return std::nullopt;
    }
    auto name = parse_name_tokens();
    if (!name) {
      pos_ = save;
      return std::nullopt;
    }
    return ParsedItem{MemoryCommand{NameCommand{*name}}};
  }

  std::optional<std::string> parse_recall_name() {
    std::vector<std::string> words;
    while (!at_end()) {
      const Token *t = peek();
      if (t->type != Token::Type::Word || kNameStops.count(t->lower) > 0) {
        break;
      }
      words.push_back(t->raw);
      ++pos_;
    }
    if (words.empty()) {
      return std::nullopt;
    }
    return text::join(words, " ");
  }

  // --- objects --------------------------------------------------------------

  std::optional<ObjectParse> parse_object() {
    const std::size_t save = pos_;
    if (accept("it") || accept("this") || accept("that")) {
      return ObjectParse{ObjectParse::Type::Pronoun};
    }
    const bool another = accept("another");
    if (!another) {
      accept("a") || accept("an") || accept("the");
    }

    // Counted groups: "a row of four purple gaskets".
    {
      const std::size_t group_save = pos_;
      std::optional<GroupAxis> axis;
      const bool horizontal = accept("horizontal");
      const bool vertical = !horizontal && accept("vertical");
      if (accept("row") || accept("line")) {
        axis = vertical ? GroupAxis::Column : GroupAxis::Row;
      } else if (accept("column")) {
        axis = GroupAxis::Column;
      } else if (!horizontal && !vertical && (accept("tower") || accept("stack"))) {
        axis = GroupAxis::Tower;
      }
      if (axis) {
        accept("made");
      }
      if (axis && accept("of") && !another) {
        if (auto count = parse_cardinal_token(); count && *count >= 1 && *count <= kGridSize) {
          accept("more");
          ObjectParse group{ObjectParse::Type::Group};
          group.count = *count;
          group.group = *axis;
          group.color = parse_color();
          if (auto noun = parse_part_noun()) {
            group.kind = noun->kind;
            return group;
          }
        }
      }
      pos_ = group_save;
    }

    const std::size_t noun_save = pos_;
    const auto color = parse_color();
    if (auto noun = parse_part_noun()) {
      ObjectParse part{ObjectParse::Type::Part};
      part.color = color;
      part.kind = noun->kind;
      return part;
    }
    pos_ = noun_save;

    // Not a part: treat as a stored shape name.
    ObjectParse recall{ObjectParse::Type::Recall};
    recall.color = parse_color();
    if (auto name = parse_recall_name()) {
      recall.name = *name;
      if (color_from_symbol(text::to_lower(recall.name))) {
        pos_ = save;
        return std::nullopt;
      }
      return recall;
    }
    pos_ = save;
    return std::nullopt;
  }

  // --- modifiers ------------------------------------------------------------

  std::optional<RelationKind> parse_relation_words() {
    if (accept_seq({"on", "top", "of"})) return RelationKind::OnTop;
    if (accept_seq({"next", "to"}) || accept("beside") || accept_seq({"adjacent", "to"})) {
      return RelationKind::NextTo;
    }
    if (accept_seq({"to", "the", "left", "of"}) || accept_seq({"left", "of"})) {
      return RelationKind::LeftOf;
    }
    if (accept_seq({"to", "the", "right", "of"}) || accept_seq({"right", "of"})) {
      return RelationKind::RightOf;
    }
    if (accept_seq({"in", "front", "of"})) return RelationKind::InFront;
    if (accept("behind")) return RelationKind::Behind;
    if (accept("above") || accept("onto") || accept("over")) return RelationKind::OnTop;
    return std::nullopt;
  }

  std::optional<SizeOverride> parse_size() {
    const std::size_t save = pos_;
    auto big = [&] {
      return accept("big") || accept("large") || accept("bigger") || accept("larger");
    };
    if (accept("twice") && accept("as") && big() && accept("as")) {
      accept("it");
      return SizeOverride{2, std::nullopt};
    }
    pos_ = save;
    if (accept("twice") && (accept("as") ? big() : (accept("the") && accept("size")))) {
      return SizeOverride{2, std::nullopt};
    }
    pos_ = save;
    if (auto n = parse_cardinal_token()) {
      if (accept("times") && (accept("as") ? big() : (accept("bigger") || accept("larger")))) {
        if (*n >= 1) return SizeOverride{*n, std::nullopt};
      }
    }
    pos_ = save;
    accept("at");
    if (accept("double") || accept("triple")) {
      const int factor = toks_[pos_ - 1].lower == "double" ? 2 : 3;
      accept("the");
      if (accept("size")) return SizeOverride{factor, std::nullopt};
    }
    pos_ = save;
    if (accept("scaled")) {
      if (accept("by")) {
        if (auto n = parse_cardinal_token(); n && *n >= 1) return SizeOverride{*n, std::nullopt};
      } else if (accept("to")) {
        auto a = parse_cardinal_token();
        if (a && accept("by")) {
          auto b = parse_cardinal_token();
          if (b && accept("by")) {
            auto c = parse_cardinal_token();
            if (c) return SizeOverride{std::nullopt, std::array<int, 3>{*a, *b, *c}};
          }
        }
      }
    }
    pos_ = save;
    return std::nullopt;
  }

  // Returns false when nothing matched (position unchanged).
  bool parse_modifier(ClauseMods &mods, bool &conflict) {
    const std::size_t save = pos_;

    if (accept_seq({"on", "top"})) {
      DependentRelation rel{RelationKind::OnTop, AnchorRef{}};
      const std::size_t before_of = pos_;
      if (accept("of")) {
        if (auto ref = parse_ref()) {
          rel.target = *ref;
        } else {
          pos_ = before_of;
        }
      }
      if (mods.relation) conflict = true;
      mods.relation = rel;
      return true;
    }
    if (auto kind = parse_relation_words()) {
      if (auto ref = parse_ref()) {
        if (mods.relation) conflict = true;
        mods.relation = DependentRelation{*kind, *ref};
        return true;
      }
      pos_ = save;
    }

    if (accept("starting") || accept("beginning")) {
      accept("at") || accept("on") || accept("from") || accept("in");
      if (auto position = parse_position()) {
        if (!mods.position.merge(*position)) conflict = true;
        return true;
      }
      pos_ = save;
      return false;
    }

    if (accept("at") || accept("on") || accept("in") || accept("to")) {
      if (auto position = parse_position()) {
        if (!mods.position.merge(*position)) conflict = true;
        return true;
      }
      pos_ = save;
      if (accept("on")) {
        if (auto ref = parse_ref()) {
          if (mods.relation) conflict = true;
          mods.relation = DependentRelation{RelationKind::OnTop, *ref};
          return true;
        }
      }
      pos_ = save;
      if (accept("in")) {
        if (auto color = parse_color()) {
          if (mods.color && mods.color != color) conflict = true;
          mods.color = color;
          return true;
        }
      }
      pos_ = save;
    }

    if (auto position = parse_position()) {
      if (!mods.position.merge(*position)) conflict = true;
      return true;
    }
    pos_ = save;

    if (accept("with") || accept("using") || accept_seq({"made", "of"}) ||
        accept_seq({"made", "from"}) || accept_seq({"out", "of"})) {
      if (auto noun = parse_part_noun(); noun && noun->kind) {
        if (mods.part_override) conflict = true;
        mods.part_override = noun->kind;
        return true;
      }
      pos_ = save;
    }

    if (auto size = parse_size()) {
      if (mods.size) conflict = true;
      mods.size = size;
      return true;
    }
    pos_ = save;
    return false;
  }

  bool modifier_follows() {
    const std::size_t save = pos_;
    ClauseMods scratch;
    bool conflict = false;
    const bool ok = parse_modifier(scratch, conflict);
    pos_ = save;
    return ok;
  }

  void parse_modifiers(ClauseMods &mods, bool &conflict) {
    while (!at_end()) {
      const std::size_t save = pos_;
      if (accept_comma()) {
        if (!modifier_follows()) {
          pos_ = save;
          break;
        }
      }
      if (!parse_modifier(mods, conflict)) {
        pos_ = save;
        break;
      }
    }
  }

  // --- clauses --------------------------------------------------------------

  static void apply_position(PartialPlacementSpec &spec, const PositionParse &p) {
    auto set = [&](std::optional<int> &dst, const std::optional<int> &v, Field f) {
      if (v) {
        dst = v;
        spec.set_source(f, Source::Utterance);
      }
    };
    set(spec.x, p.x, Field::X);
    set(spec.y, p.y, Field::Y);
    set(spec.z, p.z, Field::Z);
    set(spec.x2, p.x2, Field::X2);
    set(spec.y2, p.y2, Field::Y2);
    spec.relative = p.relative;
  }

  static bool valid_range(const PositionParse &p) {
    for (const auto &v : {p.x, p.y, p.z, p.x2, p.y2}) {
      if (v && !in_bounds(*v)) return false;
    }
    return true;
  }

  std::optional<std::vector<ParsedItem>> parse_clause(bool allow_verbless) {
    if (auto name = parse_name_command()) {
      return std::vector<ParsedItem>{*name};
    }
    const std::size_t start = pos_;
    skip_politeness();

    ClauseMods mods;
    bool conflict = false;
    bool prefixed = false;
    {
      const std::size_t save = pos_;
      const bool starting = accept("starting") || accept("beginning");
      if (accept("at") || accept("on") || accept("in") || accept("from") || starting) {
        if (auto position = parse_position(); position && accept_comma()) {
          mods.position = *position;
          prefixed = true;
        } else {
          pos_ = save;
        }
      }
    }
    skip_politeness();

    if (!accept_verb() && !allow_verbless && !prefixed) {
      pos_ = start;
      return std::nullopt;
    }
    auto object = parse_object();
    if (!object) {
      pos_ = start;
      return std::nullopt;
    }
    parse_modifiers(mods, conflict);
    if (conflict || !valid_range(mods.position)) {
      return std::nullopt;
    }
    const bool absolute = mods.position.x || mods.position.y || mods.position.x2 || mods.position.y2;
    if (mods.relation && (absolute || mods.position.z || mods.position.relative)) {
      return std::nullopt;
    }
    if (mods.position.relative && absolute) {
      return std::nullopt;
    }

    if (object->type == ObjectParse::Type::Recall) {
      RecallCommand recall;
      recall.name = object->name;
      apply_position(recall.target, mods.position);
      recall.target.relation = mods.relation;
      if (object->color && mods.color && object->color != mods.color) {
        return std::nullopt;
      }
      recall.color = object->color ? object->color : mods.color;
      recall.part = mods.part_override;
      recall.size = mods.size;
      return std::vector<ParsedItem>{MemoryCommand{std::move(recall)}};
    }

    if (mods.part_override || mods.size) {
      return std::nullopt;
    }
    if (object->color && mods.color && object->color != mods.color) {
      return std::nullopt;
    }

    PartialPlacementSpec first;
    first.kind = object->kind;
    first.color = object->color ? object->color : mods.color;
    if (first.kind) first.set_source(Field::Kind, Source::Utterance);
    if (first.color) first.set_source(Field::Color, Source::Utterance);
    apply_position(first, mods.position);
    first.relation = mods.relation;

    std::vector<ParsedItem> out{first};
    if (object->type == ObjectParse::Type::Group) {
      RelationKind step = RelationKind::RightOf;
      if (object->group == GroupAxis::Column) step = RelationKind::InFront;
      if (object->group == GroupAxis::Tower) step = RelationKind::OnTop;
      for (int i = 1; i < object->count; ++i) {
        PartialPlacementSpec next;
        next.kind = first.kind;
        next.color = first.color;
        next.set_source(Field::Kind, first.source(Field::Kind));
        next.set_source(Field::Color, first.source(Field::Color));
        next.relation = DependentRelation{step, AnchorRef{}};
        out.emplace_back(std::move(next));
      }
    }
    return out;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace

Result<std::vector<ParsedItem>> parse_instruction(std::string_view text) {
  if (text::trim(text).empty()) {
    return make_error(Errc::Unparseable, "empty instruction");
  }
  Parser parser(tokenize(text));
  auto items = parser.utterance();
  if (!items) {
    return make_error(Errc::Unparseable, "could not understand \"" + text::trim(text) + "\"");
  }
  return std::move(*items);
}

std::optional<PartKind> parse_part_answer(std::string_view text) {
  Parser parser(tokenize(text));
  auto noun = parser.lone_noun();
  if (!noun || !noun->kind) {
    return std::nullopt;
  }
  return noun->kind;
}

std::optional<Color> parse_color_answer(std::string_view text) {
  Parser parser(tokenize(text));
  return parser.lone_color();
}

std::optional<int> parse_axis_answer(std::string_view text, Field axis) {
  Axis wanted = Axis::Column;
  if (axis == Field::Y) wanted = Axis::Row;
  else if (axis == Field::Z) wanted = Axis::Height;
  else if (axis != Field::X) return std::nullopt;
  Parser parser(tokenize(text));
  auto value = parser.lone_axis(wanted);
  if (!value || !in_bounds(*value)) {
    return std::nullopt;
  }
  return value;
}

} // namespace blockwright::grammar
