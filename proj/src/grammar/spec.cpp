#include "blockwright/grammar/spec.hpp"

namespace blockwright {

std::string_view field_name(Field f) {
  switch (f) {
  case Field::Kind: return "kind";
  case Field::Color: return "color";
  case Field::X: return "x";
  case Field::Y: return "y";
  case Field::Z: return "z";
  case Field::X2: return "x2";
  case Field::Y2: return "y2";
  }
  return "kind";
}

std::optional<Field> field_from_name(std::string_view name) {
  for (Field f : {Field::Kind, Field::Color, Field::X, Field::Y, Field::Z, Field::X2, Field::Y2}) {
    if (field_name(f) == name) {
      return f;
    }
  }
  return std::nullopt;
}

std::string_view source_name(Source s) {
  switch (s) {
  case Source::Unset: return "unset";
  case Source::Utterance: return "utterance";
  case Source::Answer: return "answer";
  case Source::Memory: return "memory";
  case Source::Locator: return "locator";
  }
  return "unset";
}

std::string_view to_symbol(RelativeLabel label) {
  switch (label) {
  case RelativeLabel::TopLeft: return "top-left";
  case RelativeLabel::TopRight: return "top-right";
  case RelativeLabel::BottomLeft: return "bottom-left";
  case RelativeLabel::BottomRight: return "bottom-right";
  case RelativeLabel::Middle: return "middle";
  case RelativeLabel::TopMiddle: return "top-middle";
  case RelativeLabel::BottomMiddle: return "bottom-middle";
  case RelativeLabel::LeftMiddle: return "left-middle";
  case RelativeLabel::RightMiddle: return "right-middle";
  }
  return "middle";
}

std::optional<RelativeLabel> relative_from_symbol(std::string_view symbol) {
  for (auto label : {RelativeLabel::TopLeft, RelativeLabel::TopRight, RelativeLabel::BottomLeft,
                     RelativeLabel::BottomRight, RelativeLabel::Middle, RelativeLabel::TopMiddle,
                     RelativeLabel::BottomMiddle, RelativeLabel::LeftMiddle,
                     RelativeLabel::RightMiddle}) {
    if (to_symbol(label) == symbol) {
      return label;
    }
  }
  if (symbol == "center") {
    return RelativeLabel::Middle;
  }
  return std::nullopt;
}

std::string_view to_symbol(RelationKind kind) {
  switch (kind) {
  case RelationKind::OnTop: return "on-top";
  case RelationKind::NextTo: return "next-to";
  case RelationKind::LeftOf: return "left-of";
  case RelationKind::RightOf: return "right-of";
  case RelationKind::InFront: return "in-front";
  case RelationKind::Behind: return "behind";
  }
  return "on-top";
}

std::optional<RelationKind> relation_from_symbol(std::string_view symbol) {
  for (auto kind : {RelationKind::OnTop, RelationKind::NextTo, RelationKind::LeftOf,
                    RelationKind::RightOf, RelationKind::InFront, RelationKind::Behind}) {
    if (to_symbol(kind) == symbol) {
      return kind;
    }
  }
  return std::nullopt;
}

bool PartialPlacementSpec::has(Field f) const {
  switch (f) {
  case Field::Kind: return kind.has_value();
  case Field::Color: return color.has_value();
  case Field::X: return x.has_value();
  case Field::Y: return y.has_value();
  case Field::Z: return z.has_value();
  case Field::X2: return x2.has_value();
  case Field::Y2: return y2.has_value();
  }
  return false;
}

void PartialPlacementSpec::clear(Field f) {
  switch (f) {
  case Field::Kind: kind.reset(); break;
  case Field::Color: color.reset(); break;
  case Field::X: x.reset(); break;
  case Field::Y: y.reset(); break;
  case Field::Z: z.reset(); break;
  case Field::X2: x2.reset(); break;
  case Field::Y2: y2.reset(); break;
  }
  set_source(f, Source::Unset);
}

bool PartialPlacementSpec::operator==(const PartialPlacementSpec &o) const {
  return kind == o.kind && color == o.color && x == o.x && y == o.y && z == o.z && x2 == o.x2 &&
         y2 == o.y2 && relative == o.relative && relation == o.relation;
}

} // namespace blockwright
