#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "blockwright/common/result.hpp"
#include "blockwright/grid/cell.hpp"
#include "blockwright/grid/parts.hpp"

namespace blockwright {

using PartId = std::uint32_t;

struct PlacedPart {
  PartId id = 0;
  PartKind kind = PartKind::Screw;
  Color color = Color::Blue;
  Cell anchor;
  std::vector<Cell> cells;

  bool operator==(const PlacedPart &) const = default;
};

struct PlaceAction {
  PartKind kind = PartKind::Screw;
  Color color = Color::Blue;
  Cell anchor;

  bool operator==(const PlaceAction &) const = default;
};

struct RemoveAction {
  Cell cell;

  bool operator==(const RemoveAction &) const = default;
};

using Action = std::variant<PlaceAction, RemoveAction>;

/// Immutable board value. Operations below return new states; the input is
/// never modified, so a state can be shared freely between readers.
class GridState {
public:
  GridState() { occupancy_.fill(0); }

  std::optional<PartId> occupant(const Cell &c) const;
  bool occupied(const Cell &c) const { return occupant(c).has_value(); }

  const std::map<PartId, PlacedPart> &parts() const { return parts_; }
  const PlacedPart *part(PartId id) const;
  const std::vector<Action> &history() const { return history_; }
  PartId next_id() const { return next_id_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }

  /// Highest occupied z in the (x, y) column, 0 when the column is empty.
  int column_top(int x, int y) const;

  /// Occupancy and parts only; history and the id counter are ignored.
  bool same_contents(const GridState &other) const;

private:
  friend Result<GridState> place(const GridState &, PartKind, Color, Cell);
  friend Result<GridState> remove(const GridState &, Cell);

  static std::size_t index(const Cell &c) {
    return static_cast<std::size_t>(((c.z - 1) * kGridSize + (c.y - 1)) * kGridSize + (c.x - 1));
  }

  std::array<PartId, kGridSize * kGridSize * kGridSize> occupancy_{};
  std::map<PartId, PlacedPart> parts_;
  std::vector<Action> history_;
  PartId next_id_ = 1;
};

Result<std::vector<Cell>> footprint(PartKind kind, Cell anchor);

/// Ground level or a part directly below. Bridges need this for one cell only.
bool supported(const GridState &state, PartKind kind, std::span<const Cell> cells);

Result<GridState> place(const GridState &state, PartKind kind, Color color, Cell anchor);
Result<GridState> remove(const GridState &state, Cell cell);
Result<GridState> apply(const GridState &state, const Action &action);

/// Height at which a part dropped at (x, y) comes to rest: one above the
/// tallest column its footprint covers.
Result<int> drop_height(const GridState &state, PartKind kind, int x, int y);

/// Full consistency check: occupancy/parts agreement, footprints, support.
Status validate(const GridState &state);

} // namespace blockwright
