#include "blockwright/agent/stages.hpp"

#include <algorithm>

#include "blockwright/common/text.hpp"
#include "blockwright/grammar/lexicon.hpp"
#include "blockwright/grammar/parser.hpp"
#include "blockwright/memory/shape_graph.hpp"

namespace blockwright::agent {

namespace {

bool matches(const AnchorRef &ref, const std::optional<PartKind> &kind, const std::optional<Color> &color) {
  if (ref.kind && kind != ref.kind) return false;
  if (ref.color && color != ref.color) return false;
  return true;
}

std::string describe(const AnchorRef &ref) {
  if (ref.type == AnchorRef::Type::Recent) return "the previous part";
  std::string out = "the";
  if (ref.color) out += " " + std::string(to_symbol(*ref.color));
  out += " " + (ref.kind ? std::string(display_name(*ref.kind)) : std::string("part"));
  return out;
}

// Anchor cell of the part a reference points at; nullopt while that part's
// position is still unknown.
Result<std::optional<Cell>> resolve_anchor(const AnchorRef &ref, const LocateContext &ctx) {
  for (auto it = ctx.recent.rbegin(); it != ctx.recent.rend(); ++it) {
    if (ref.type == AnchorRef::Type::Recent || matches(ref, it->kind, it->color)) {
      return it->anchor;
    }
  }
  const auto &parts = ctx.grid->parts();
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (ref.type == AnchorRef::Type::Recent || matches(ref, it->second.kind, it->second.color)) {
      return std::optional<Cell>(it->second.anchor);
    }
  }
  return make_error(Errc::AmbiguousAnchor, "there is no " + describe(ref).substr(4) + " to refer to");
}

std::string part_words(const PartialPlacementSpec &s) {
  std::string out;
  if (s.color) out += std::string(to_symbol(*s.color)) + " ";
  out += s.kind ? std::string(display_name(*s.kind)) : "part";
  return out;
}

} // namespace

Result<PartialPlacementSpec> locate(const PartialPlacementSpec &in, const LocateContext &ctx) {
  PartialPlacementSpec s = in;
  auto set = [&s](std::optional<int> &dst, int v, Field f) {
    dst = v;
    s.set_source(f, Source::Locator);
  };

  if (s.relative && !s.x && !s.y) {
    const auto [x, y] = grammar::resolve_relative(*s.relative);
    set(s.x, x, Field::X);
    set(s.y, y, Field::Y);
  }
  if (s.relation && !s.x && !s.y) {
    auto anchor = resolve_anchor(s.relation->target, ctx);
    if (!anchor) return anchor.error();
    if (anchor.value()) {
      const Cell a = *anchor.value();
      const Cell target = a + grammar::relation_offset(s.relation->kind);
      if (!in_bounds(target.x) || !in_bounds(target.y) || !in_bounds(target.z)) {
        return make_error(Errc::OutOfBounds, "the spot " + std::string(to_symbol(s.relation->kind)) + " " +
                                                 describe(s.relation->target) + " is off the board");
      }
      set(s.x, target.x, Field::X);
      set(s.y, target.y, Field::Y);
      if (s.relation->kind == RelationKind::OnTop && !s.z) set(s.z, target.z, Field::Z);
    }
  }

  if (s.x2 && (s.kind && s.kind != PartKind::HorizontalBridge)) {
    return make_error(Errc::InvalidArgument, "only a horizontal bridge spans two columns");
  }
  if (s.y2 && (s.kind && s.kind != PartKind::VerticalBridge)) {
    return make_error(Errc::InvalidArgument, "only a vertical bridge spans two rows");
  }
  if (s.x2 && s.x && *s.x2 != *s.x + 1) {
    return make_error(Errc::InvalidArgument, "a bridge spans two neighboring columns");
  }
  if (s.y2 && s.y && *s.y2 != *s.y + 1) {
    return make_error(Errc::InvalidArgument, "a bridge spans two neighboring rows");
  }
  if (s.kind == PartKind::HorizontalBridge && s.x && !s.x2) set(s.x2, *s.x + 1, Field::X2);
  if (s.kind == PartKind::VerticalBridge && s.y && !s.y2) set(s.y2, *s.y + 1, Field::Y2);

  if (s.x && s.y && !s.z) {
    auto z = drop_height(*ctx.grid, s.kind.value_or(PartKind::Screw), *s.x, *s.y);
    if (!z) return z.error();
    set(s.z, z.value(), Field::Z);
  }
  return s;
}

Result<int> shape_drop_height(const GridState &grid, const memory::ShapeGraph &graph, int x, int y,
                              const memory::ApplyOverrides &overrides) {
  Error last = make_error(Errc::OutOfBounds, "the shape does not fit in that column");
  for (int z = 1; z <= kGridSize; ++z) {
    auto actions = memory::apply_at(graph, {x, y, z}, overrides);
    if (!actions) {
      last = actions.error();
      if (last.code != Errc::OutOfBounds) return last;
      continue;
    }
    GridState trial = grid;
    bool fits = true;
    for (const auto &a : actions.value()) {
      auto next = place(trial, a.kind, a.color, a.anchor);
      if (!next) {
        last = next.error();
        fits = false;
        break;
      }
      trial = std::move(next).value();
    }
    if (fits) return z;
  }
  return last;
}

Result<ResolvedStructure> build(const TurnItem &item, const memory::ShapeStore &shapes, const GridState &grid) {
  if (!item.recall) return ResolvedStructure{{item.spec}, std::nullopt};
  const RecallCommand &recall = *item.recall;
  auto stored = shapes.retrieve(recall.name);
  if (!stored) return stored.error();
  const auto &graph = stored.value().graph;
  ResolvedStructure out;
  out.shape = graph.name;
  if (!item.spec.x || !item.spec.y) return out;

  memory::ApplyOverrides overrides;
  overrides.color = recall.color;
  overrides.part = recall.part;
  if (recall.size) {
    overrides.factor = recall.size->factor;
    overrides.box = recall.size->box;
  }
  int start_z = 1;
  if (item.spec.z && item.spec.source(Field::Z) != Source::Locator) {
    start_z = *item.spec.z;
  } else {
    auto z = shape_drop_height(grid, graph, *item.spec.x, *item.spec.y, overrides);
    if (!z) return z.error();
    start_z = z.value();
  }
  auto placed = memory::apply_at(graph, {*item.spec.x, *item.spec.y, start_z}, overrides);
  if (!placed) return placed.error();
  for (const auto &a : placed.value()) {
    PartialPlacementSpec s;
    s.kind = a.kind;
    s.color = a.color;
    s.x = a.anchor.x;
    s.y = a.anchor.y;
    s.z = a.anchor.z;
    for (Field f : {Field::Kind, Field::Color, Field::X, Field::Y, Field::Z}) s.set_source(f, Source::Memory);
    if (recall.color) s.set_source(Field::Color, Source::Utterance);
    if (recall.part && a.kind == *recall.part) s.set_source(Field::Kind, Source::Utterance);
    if (a.kind == PartKind::HorizontalBridge) {
      s.x2 = a.anchor.x + 1;
      s.set_source(Field::X2, Source::Memory);
    } else if (a.kind == PartKind::VerticalBridge) {
      s.y2 = a.anchor.y + 1;
      s.set_source(Field::Y2, Source::Memory);
    }
    out.parts.push_back(std::move(s));
  }
  return out;
}

std::optional<PendingField> next_clarification(const std::vector<TurnItem> &items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto &s = items[i].spec;
    if (items[i].recall) {
      if (!s.x) return PendingField{i, Field::X};
      if (!s.y) return PendingField{i, Field::Y};
      continue;
    }
    for (Field f : kQuestionOrder) {
      if (!s.has(f)) return PendingField{i, f};
    }
  }
  return std::nullopt;
}

std::string question_text(const std::vector<TurnItem> &items, const PendingField &target) {
  const TurnItem &item = items[target.item];
  const auto &s = item.spec;
  std::string q;
  if (item.recall) {
    const std::string axis = target.field == Field::X ? "column" : "row";
    q = "Which " + axis + " should I build the " + item.recall->name + " in?";
  } else {
    switch (target.field) {
    case Field::Kind:
      q = "Which part should I place";
      if (s.x && s.y) {
        q += " at column " + std::to_string(*s.x) + ", row " + std::to_string(*s.y);
      }
      q += "?";
      break;
    case Field::Color:
      q = "What color should the " + (s.kind ? std::string(display_name(*s.kind)) : std::string("part")) + " be?";
      break;
    case Field::X:
      q = "Which column should I place the " + part_words(s) + " in?";
      break;
    case Field::Y:
      q = "Which row should I place the " + part_words(s) + " in?";
      break;
    default:
      q = "Where should I place the " + part_words(s) + "?";
    }
  }
  if (items.size() > 1) q = "Part " + std::to_string(target.item + 1) + ": " + q;
  return q;
}

Result<FieldValue> read_answer(Field field, std::string_view answer) {
  switch (field) {
  case Field::Kind:
    if (auto k = grammar::parse_part_answer(answer)) return FieldValue{*k};
    break;
  case Field::Color:
    if (auto c = grammar::parse_color_answer(answer)) return FieldValue{*c};
    break;
  case Field::X:
  case Field::Y:
  case Field::Z:
    if (auto v = grammar::parse_axis_answer(answer, field)) return FieldValue{*v};
    break;
  default:
    break;
  }
  return make_error(Errc::UnusableAnswer,
                    "\"" + text::trim(answer) + "\" does not give a " + std::string(field_name(field)));
}

Status merge_answer(ClarificationState &state, const std::string &question_id, std::string_view answer,
                    std::vector<PartialPlacementSpec> &specs) {
  auto it = state.asked.find(question_id);
  if (it == state.asked.end()) {
    return make_error(Errc::InvalidArgument, "question " + question_id + " was never asked");
  }
  const PendingField target = it->second;
  if (target.item >= specs.size() || specs[target.item].has(target.field)) {
    return make_error(Errc::InvalidArgument, "question " + question_id + " targets a filled field");
  }
  auto value = read_answer(target.field, answer);
  if (!value) return value.error();
  auto &s = specs[target.item];
  switch (target.field) {
  case Field::Kind: s.kind = std::get<PartKind>(value.value()); break;
  case Field::Color: s.color = std::get<Color>(value.value()); break;
  case Field::X: s.x = std::get<int>(value.value()); break;
  case Field::Y: s.y = std::get<int>(value.value()); break;
  case Field::Z: s.z = std::get<int>(value.value()); break;
  default: return make_error(Errc::InvalidArgument, "field cannot be answered");
  }
  s.set_source(target.field, Source::Answer);
  state.answers[question_id] = std::string(answer);
  state.pending.erase(std::remove(state.pending.begin(), state.pending.end(), target), state.pending.end());
  return {};
}

Status check_provenance(const std::vector<PartialPlacementSpec> &specs) {
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (Field f : {Field::Kind, Field::Color, Field::X, Field::Y, Field::Z, Field::X2, Field::Y2}) {
      if (specs[i].has(f) && specs[i].source(f) == Source::Unset) {
        return make_error(Errc::InvalidArgument, "spec " + std::to_string(i + 1) + " field " +
                                                     std::string(field_name(f)) + " has no source");
      }
    }
  }
  return {};
}

} // namespace blockwright::agent
