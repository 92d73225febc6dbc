#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace blockwright {

inline constexpr int kGridSize = 16;

/// x is the column (1 = leftmost), y the row (1 = top), z the height (1 = ground).
struct Cell {
  int x = 1;
  int y = 1;
  int z = 1;

  auto operator<=>(const Cell &) const = default;

  Cell operator+(const Cell &o) const { return {x + o.x, y + o.y, z + o.z}; }
  Cell operator-(const Cell &o) const { return {x - o.x, y - o.y, z - o.z}; }

  std::string to_string() const;
};

inline bool in_bounds(int v) { return v >= 1 && v <= kGridSize; }
inline bool in_bounds(const Cell &c) { return in_bounds(c.x) && in_bounds(c.y) && in_bounds(c.z); }

enum class Direction { PosX, NegX, PosY, NegY, PosZ, NegZ };

/// Fixed expansion order used wherever neighbors are enumerated.
inline constexpr std::array<Direction, 6> kAllDirections = {
    Direction::PosX, Direction::NegX, Direction::PosY,
    Direction::NegY, Direction::PosZ, Direction::NegZ};

Cell delta(Direction d);
Direction opposite(Direction d);
std::string_view direction_label(Direction d);
std::optional<Direction> direction_from_label(std::string_view label);

} // namespace blockwright
