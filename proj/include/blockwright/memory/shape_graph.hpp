#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blockwright/common/result.hpp"
#include "blockwright/grid/grid_state.hpp"

namespace blockwright::memory {

/// Unit adjacency between two parts. Bridges have two cells, so the edge
/// also says which cell of each part touches (0 = anchor, 1 = second cell).
struct GraphEdge {
  std::size_t to = 0;
  Direction dir = Direction::PosX;
  int from_cell = 0;
  int to_cell = 0;

  bool operator==(const GraphEdge &) const = default;
};

struct GraphNode {
  PartKind kind = PartKind::Screw;
  Color color = Color::Blue;
  std::vector<GraphEdge> edges;

  bool operator==(const GraphNode &) const = default;
};

/// Coordinate-free form of a structure. Node ids are positions in the
/// original placement order; components appear in discovery order and each
/// lists its nodes in breadth-first order starting from its first node.
struct ShapeGraph {
  std::string name;
  std::vector<GraphNode> nodes;
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> firsts;
  std::vector<Cell> offsets;
  Cell origin; // anchor of firsts[0] where the structure was built

  bool operator==(const ShapeGraph &) const = default;
};

ShapeGraph to_graph(const std::vector<PlacedPart> &structure, std::string name = {});

/// offsets[i] = firsts[i] - firsts[0].
std::vector<Cell> component_offsets(const std::vector<Cell> &first_anchors);

/// Edge symmetry, unit directions, connectivity, offsets[0] == 0.
Status validate_graph(const ShapeGraph &graph);

struct ApplyOverrides {
  std::optional<Color> color;
  std::optional<PartKind> part;
  std::optional<int> factor;
  std::optional<std::array<int, 3>> box;
};

/// Regenerates the structure with firsts[0] at start. Parts come out in an
/// order where every part's support precedes it.
Result<std::vector<PlaceAction>> apply_at(const ShapeGraph &graph, Cell start,
                                          const ApplyOverrides &overrides = {});

/// Nearest-neighbor resampling of single-cell parts into a box of the given
/// size, anchored at the source's minimum corner.
Result<std::vector<PlaceAction>> scale_shape(const std::vector<PlaceAction> &structure,
                                             std::array<int, 3> box);

/// Same parts up to a single translation.
bool shapes_equivalent(const std::vector<PlacedPart> &a, const std::vector<PlacedPart> &b,
                       bool compare_color = true);

std::vector<PlacedPart> as_parts(const std::vector<PlaceAction> &actions);

nlohmann::ordered_json graph_to_json(const ShapeGraph &graph);
Result<ShapeGraph> graph_from_json(const nlohmann::json &j);

} // namespace blockwright::memory
