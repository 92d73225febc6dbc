#pragma once

#include <string_view>
#include <utility>

#include "blockwright/common/result.hpp"
#include "blockwright/grammar/spec.hpp"

namespace blockwright::grammar {

/// Board position named by a relative label, as (column, row).
///
///   top-left (1,1)     top-middle (8,1)     top-right (16,1)
///   left-middle (1,8)  middle (8,8)         right-middle (16,8)
///   bottom-left (1,16) bottom-middle (8,16) bottom-right (16,16)
std::pair<int, int> resolve_relative(RelativeLabel label);
Result<std::pair<int, int>> resolve_relative(std::string_view label);

/// Words used in instructions, e.g. "top left".
std::string_view relative_phrase(RelativeLabel label);

/// Offset applied to the anchor's anchor cell by a dependent relation.
Cell relation_offset(RelationKind kind);

} // namespace blockwright::grammar
