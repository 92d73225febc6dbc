#include "blockwright/grid/grid_state.hpp"

#include <algorithm>

namespace blockwright {

std::optional<PartId> GridState::occupant(const Cell &c) const {
  if (!in_bounds(c)) {
    return std::nullopt;
  }
  const PartId id = occupancy_[index(c)];
  if (id == 0) {
    return std::nullopt;
  }
  return id;
}

const PlacedPart *GridState::part(PartId id) const {
  const auto it = parts_.find(id);
  return it == parts_.end() ? nullptr : &it->second;
}

int GridState::column_top(int x, int y) const {
  for (int z = kGridSize; z >= 1; --z) {
    if (occupied({x, y, z})) {
      return z;
    }
  }
  return 0;
}

bool GridState::same_contents(const GridState &other) const {
  return occupancy_ == other.occupancy_ && parts_ == other.parts_;
}

Result<std::vector<Cell>> footprint(PartKind kind, Cell anchor) {
  if (!in_bounds(anchor)) {
    return make_error(Errc::OutOfBounds, "anchor " + anchor.to_string() + " is outside the grid");
  }
  std::vector<Cell> cells{anchor};
  if (kind == PartKind::HorizontalBridge) {
    cells.push_back(anchor + Cell{1, 0, 0});
  } else if (kind == PartKind::VerticalBridge) {
    cells.push_back(anchor + Cell{0, 1, 0});
  }
  if (!in_bounds(cells.back())) {
    return make_error(Errc::OutOfBounds,
                      "second bridge cell " + cells.back().to_string() + " is outside the grid");
  }
  return cells;
}

bool supported(const GridState &state, PartKind kind, std::span<const Cell> cells) {
  auto rests = [&](const Cell &c) { return c.z == 1 || state.occupied(c - Cell{0, 0, 1}); };
  if (is_bridge(kind)) {
    return std::any_of(cells.begin(), cells.end(), rests);
  }
  return std::all_of(cells.begin(), cells.end(), rests);
}

Result<GridState> place(const GridState &state, PartKind kind, Color color, Cell anchor) {
  auto cells = footprint(kind, anchor);
  if (!cells.ok()) {
    return cells.error();
  }
  for (const Cell &c : cells.value()) {
    if (state.occupied(c)) {
      return make_error(Errc::Occupied, "cell " + c.to_string() + " is already occupied");
    }
  }
  if (!supported(state, kind, cells.value())) {
    return make_error(Errc::Unsupported,
                      "nothing supports " + cells.value().front().to_string());
  }

  GridState next = state;
  const PartId id = next.next_id_++;
  for (const Cell &c : cells.value()) {
    next.occupancy_[GridState::index(c)] = id;
  }
  next.parts_.emplace(id, PlacedPart{id, kind, color, anchor, std::move(cells).value()});
  next.history_.emplace_back(PlaceAction{kind, color, anchor});
  return next;
}

Result<GridState> remove(const GridState &state, Cell cell) {
  const auto owner = state.occupant(cell);
  if (!owner) {
    return make_error(Errc::Empty, "no part at " + cell.to_string());
  }
  const PlacedPart &target = *state.part(*owner);

  GridState next = state;
  for (const Cell &c : target.cells) {
    next.occupancy_[GridState::index(c)] = 0;
  }
  next.parts_.erase(target.id);

  for (const Cell &c : target.cells) {
    const auto above = next.occupant(c + Cell{0, 0, 1});
    if (!above) {
      continue;
    }
    const PlacedPart &resting = *next.part(*above);
    if (!supported(next, resting.kind, resting.cells)) {
      return make_error(Errc::WouldFloat,
                        "removing " + cell.to_string() + " would leave part " +
                            std::to_string(resting.id) + " floating",
                        static_cast<int>(resting.id));
    }
  }
  next.history_.emplace_back(RemoveAction{cell});
  return next;
}

Result<GridState> apply(const GridState &state, const Action &action) {
  if (const auto *p = std::get_if<PlaceAction>(&action)) {
    return place(state, p->kind, p->color, p->anchor);
  }
  return remove(state, std::get<RemoveAction>(action).cell);
}

Result<int> drop_height(const GridState &state, PartKind kind, int x, int y) {
  auto cells = footprint(kind, {x, y, 1});
  if (!cells.ok()) {
    return cells.error();
  }
  int top = 0;
  for (const Cell &c : cells.value()) {
    top = std::max(top, state.column_top(c.x, c.y));
  }
  if (top >= kGridSize) {
    return make_error(Errc::OutOfBounds, "column at " + Cell{x, y, top}.to_string() + " is full");
  }
  return top + 1;
}

Status validate(const GridState &state) {
  std::size_t mapped = 0;
  for (int z = 1; z <= kGridSize; ++z) {
    for (int y = 1; y <= kGridSize; ++y) {
      for (int x = 1; x <= kGridSize; ++x) {
        const Cell c{x, y, z};
        const auto id = state.occupant(c);
        if (!id) {
          continue;
        }
        ++mapped;
        const PlacedPart *p = state.part(*id);
        if (p == nullptr) {
          return make_error(Errc::InvalidArgument, "cell " + c.to_string() + " maps to unknown part");
        }
        if (std::find(p->cells.begin(), p->cells.end(), c) == p->cells.end()) {
          return make_error(Errc::InvalidArgument, "cell " + c.to_string() + " not in its part's footprint");
        }
      }
    }
  }

  std::size_t expected = 0;
  for (const auto &[id, p] : state.parts()) {
    if (p.id != id) {
      return make_error(Errc::InvalidArgument, "part id mismatch");
    }
    auto cells = footprint(p.kind, p.anchor);
    if (!cells.ok() || cells.value() != p.cells) {
      return make_error(Errc::InvalidArgument, "part " + std::to_string(id) + " has a bad footprint");
    }
    for (const Cell &c : p.cells) {
      if (state.occupant(c) != id) {
        return make_error(Errc::InvalidArgument, "part " + std::to_string(id) + " cell not mapped");
      }
    }
    if (!supported(state, p.kind, p.cells)) {
      return make_error(Errc::Unsupported, "part " + std::to_string(id) + " is floating");
    }
    if (id >= state.next_id()) {
      return make_error(Errc::InvalidArgument, "part id beyond the id counter");
    }
    expected += p.cells.size();
  }
  if (expected != mapped) {
    return make_error(Errc::InvalidArgument, "occupancy and parts disagree on cell count");
  }
  return {};
}

} // namespace blockwright
