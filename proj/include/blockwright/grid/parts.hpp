#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace blockwright {

enum class PartKind {
  Screw,
  Nut,
  Washer,
  HorizontalBridge,
  VerticalBridge,
  Bolt,
  Gasket,
  HexNut,
  SquareNut,
};

enum class Color {
  Blue,
  Orange,
  Red,
  Green,
  Yellow,
  Purple,
  Black,
  White,
  Brown,
  Magenta,
};

inline constexpr std::array<PartKind, 9> kAllPartKinds = {
    PartKind::Screw,  PartKind::Nut,    PartKind::Washer,
    PartKind::HorizontalBridge, PartKind::VerticalBridge, PartKind::Bolt,
    PartKind::Gasket, PartKind::HexNut, PartKind::SquareNut};

inline constexpr std::array<Color, 10> kAllColors = {
    Color::Blue,  Color::Orange, Color::Red,   Color::Green, Color::Yellow,
    Color::Purple, Color::Black, Color::White, Color::Brown, Color::Magenta};

/// Wire symbol, e.g. "horizontal-bridge".
std::string_view to_symbol(PartKind kind);
std::string_view to_symbol(Color color);

/// Words as they appear in instructions, e.g. "horizontal bridge".
std::string_view display_name(PartKind kind);
std::string plural_display_name(PartKind kind);

std::optional<PartKind> part_from_symbol(std::string_view symbol);
std::optional<Color> color_from_symbol(std::string_view symbol);

inline bool is_bridge(PartKind kind) {
  return kind == PartKind::HorizontalBridge || kind == PartKind::VerticalBridge;
}

} // namespace blockwright
