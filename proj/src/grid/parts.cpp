#include "blockwright/grid/parts.hpp"

namespace blockwright {

std::string_view to_symbol(PartKind kind) {
  switch (kind) {
  case PartKind::Screw: return "screw";
  case PartKind::Nut: return "nut";
  case PartKind::Washer: return "washer";
  case PartKind::HorizontalBridge: return "horizontal-bridge";
  case PartKind::VerticalBridge: return "vertical-bridge";
  case PartKind::Bolt: return "bolt";
  case PartKind::Gasket: return "gasket";
  case PartKind::HexNut: return "hex-nut";
  case PartKind::SquareNut: return "square-nut";
  }
  return "screw";
}

std::string_view to_symbol(Color color) {
  switch (color) {
  case Color::Blue: return "blue";
  case Color::Orange: return "orange";
  case Color::Red: return "red";
  case Color::Green: return "green";
  case Color::Yellow: return "yellow";
  case Color::Purple: return "purple";
  case Color::Black: return "black";
  case Color::White: return "white";
  case Color::Brown: return "brown";
  case Color::Magenta: return "magenta";
  }
  return "blue";
}

std::string_view display_name(PartKind kind) {
  switch (kind) {
  case PartKind::HorizontalBridge: return "horizontal bridge";
  case PartKind::VerticalBridge: return "vertical bridge";
  case PartKind::HexNut: return "hex nut";
  case PartKind::SquareNut: return "square nut";
  default: return to_symbol(kind);
  }
}

std::string plural_display_name(PartKind kind) {
  return std::string(display_name(kind)) + "s";
}

std::optional<PartKind> part_from_symbol(std::string_view symbol) {
  for (PartKind kind : kAllPartKinds) {
    if (to_symbol(kind) == symbol || display_name(kind) == symbol) {
      return kind;
    }
  }
  return std::nullopt;
}

std::optional<Color> color_from_symbol(std::string_view symbol) {
  for (Color color : kAllColors) {
    if (to_symbol(color) == symbol) {
      return color;
    }
  }
  return std::nullopt;
}

} // namespace blockwright
