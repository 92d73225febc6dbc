#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "blockwright/grid/cell.hpp"
#include "blockwright/grid/parts.hpp"

namespace blockwright {

enum class RelativeLabel {
  TopLeft,
  TopRight,
  BottomLeft,
  BottomRight,
  Middle,
  TopMiddle,
  BottomMiddle,
  LeftMiddle,
  RightMiddle,
};

enum class RelationKind { OnTop, NextTo, LeftOf, RightOf, InFront, Behind };

/// A reference to an earlier part: "it", "that", or "the blue screw".
struct AnchorRef {
  enum class Type { Recent, Description };
  Type type = Type::Recent;
  std::optional<PartKind> kind;
  std::optional<Color> color;

  bool operator==(const AnchorRef &) const = default;
};

struct DependentRelation {
  RelationKind kind = RelationKind::OnTop;
  AnchorRef target;

  bool operator==(const DependentRelation &) const = default;
};

/// Fields the clarification loop can fill, in question order.
enum class Field { Kind, Color, X, Y, Z, X2, Y2 };

inline constexpr std::array<Field, 4> kQuestionOrder = {Field::Kind, Field::Color, Field::X,
                                                        Field::Y};

/// Where a field's value came from. Anything executed must be traced to
/// one of these; Unset marks a value nothing has vouched for.
enum class Source { Unset, Utterance, Answer, Memory, Locator };

std::string_view field_name(Field f);
std::optional<Field> field_from_name(std::string_view name);
std::string_view source_name(Source s);

std::string_view to_symbol(RelativeLabel label);
std::optional<RelativeLabel> relative_from_symbol(std::string_view symbol);
std::string_view to_symbol(RelationKind kind);
std::optional<RelationKind> relation_from_symbol(std::string_view symbol);

/// One part's parse. Every attribute the utterance leaves unstated stays null.
struct PartialPlacementSpec {
  std::optional<PartKind> kind;
  std::optional<Color> color;
  std::optional<int> x;
  std::optional<int> y;
  std::optional<int> z;
  std::optional<int> x2;
  std::optional<int> y2;
  std::optional<RelativeLabel> relative;
  std::optional<DependentRelation> relation;

  std::array<Source, 7> sources{};

  Source source(Field f) const { return sources[static_cast<std::size_t>(f)]; }
  void set_source(Field f, Source s) { sources[static_cast<std::size_t>(f)] = s; }

  bool has(Field f) const;
  void clear(Field f);

  /// Value equality; provenance is ignored.
  bool operator==(const PartialPlacementSpec &o) const;
};

/// Size change requested on recall: a uniform factor or an explicit box.
struct SizeOverride {
  std::optional<int> factor;
  std::optional<std::array<int, 3>> box;

  bool operator==(const SizeOverride &) const = default;
};

struct NameCommand {
  std::string name;

  bool operator==(const NameCommand &) const = default;
};

struct RecallCommand {
  std::string name;
  PartialPlacementSpec target;
  std::optional<Color> color;
  std::optional<PartKind> part;
  std::optional<SizeOverride> size;

  bool operator==(const RecallCommand &) const = default;
};

using MemoryCommand = std::variant<NameCommand, RecallCommand>;
using ParsedItem = std::variant<PartialPlacementSpec, MemoryCommand>;

} // namespace blockwright
