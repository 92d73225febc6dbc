#include "blockwright/grid/cell.hpp"

namespace blockwright {

std::string Cell::to_string() const {
  return "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")";
}

Cell delta(Direction d) {
  switch (d) {
  case Direction::PosX: return {1, 0, 0};
  case Direction::NegX: return {-1, 0, 0};
  case Direction::PosY: return {0, 1, 0};
  case Direction::NegY: return {0, -1, 0};
  case Direction::PosZ: return {0, 0, 1};
  case Direction::NegZ: return {0, 0, -1};
  }
  return {0, 0, 0};
}

Direction opposite(Direction d) {
  switch (d) {
  case Direction::PosX: return Direction::NegX;
  case Direction::NegX: return Direction::PosX;
  case Direction::PosY: return Direction::NegY;
  case Direction::NegY: return Direction::PosY;
  case Direction::PosZ: return Direction::NegZ;
  case Direction::NegZ: return Direction::PosZ;
  }
  return d;
}

std::string_view direction_label(Direction d) {
  switch (d) {
  case Direction::PosX: return "+x";
  case Direction::NegX: return "-x";
  case Direction::PosY: return "+y";
  case Direction::NegY: return "-y";
  case Direction::PosZ: return "+z";
  case Direction::NegZ: return "-z";
  }
  return "+x";
}

std::optional<Direction> direction_from_label(std::string_view label) {
  for (Direction d : kAllDirections) {
    if (direction_label(d) == label) {
      return d;
    }
  }
  return std::nullopt;
}

} // namespace blockwright
