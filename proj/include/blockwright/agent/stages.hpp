#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "blockwright/common/result.hpp"
#include "blockwright/grammar/spec.hpp"
#include "blockwright/grid/grid_state.hpp"
#include "blockwright/memory/shape_graph.hpp"
#include "blockwright/memory/shape_store.hpp"

namespace blockwright::agent {

/// One unit the clarification loop works on: a part to place, or a stored
/// shape to rebuild at the location held in spec.
struct TurnItem {
  PartialPlacementSpec spec;
  std::optional<RecallCommand> recall;
};

/// An earlier part that references such as "it" or "the blue screw" may
/// point at. Attributes or position may still be unknown mid-dialogue.
struct AnchorCandidate {
  std::optional<PartKind> kind;
  std::optional<Color> color;
  std::optional<Cell> anchor;
};

struct LocateContext {
  const GridState *grid = nullptr;     // board including earlier items of the turn
  std::vector<AnchorCandidate> recent; // earlier items of the turn, oldest first
};

/// Resolves relative labels and relations to x, y (and z when on top),
/// drops z by gravity once x and y are known, and fills the second bridge
/// index. Anything unresolvable stays null.
/// Errors: AmbiguousAnchor when a reference matches nothing; InvalidArgument
/// for bridge indices that do not describe a bridge.
Result<PartialPlacementSpec> locate(const PartialPlacementSpec &spec, const LocateContext &ctx);

/// Lowest height for the shape's first part at which every part of the
/// shape can be placed.
Result<int> shape_drop_height(const GridState &grid, const memory::ShapeGraph &graph, int x, int y,
                              const memory::ApplyOverrides &overrides);

struct ResolvedStructure {
  std::vector<PartialPlacementSpec> parts;
  std::optional<std::string> shape;
};

/// Plain specs pass through; a recall with a located target is rebuilt
/// from memory with its overrides.
Result<ResolvedStructure> build(const TurnItem &item, const memory::ShapeStore &shapes,
                                const GridState &grid);

struct PendingField {
  std::size_t item = 0;
  Field field = Field::Kind;

  bool operator==(const PendingField &) const = default;
};

/// First null field in item order, then kind, color, x, y. Recalls only
/// need x and y.
std::optional<PendingField> next_clarification(const std::vector<TurnItem> &items);

std::string question_text(const std::vector<TurnItem> &items, const PendingField &target);

using FieldValue = std::variant<PartKind, Color, int>;

/// Reads an answer as a value for the field. UnusableAnswer otherwise.
Result<FieldValue> read_answer(Field field, std::string_view answer);

struct ClarificationState {
  std::vector<PendingField> pending;
  std::map<std::string, PendingField> asked;
  std::map<std::string, std::string> answers;
};

/// Fills exactly the asked field, which must still be null.
Status merge_answer(ClarificationState &state, const std::string &question_id, std::string_view answer,
                    std::vector<PartialPlacementSpec> &specs);

/// Every set field of every spec has a recorded source.
Status check_provenance(const std::vector<PartialPlacementSpec> &specs);

} // namespace blockwright::agent
