#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "blockwright/common/result.hpp"
#include "blockwright/grammar/spec.hpp"

namespace blockwright::grammar {

/// Parses one Architect utterance into placement specs and memory commands,
/// one element per described part or command, in textual order.
///
/// The grammar covers the dataset sentence shapes: absolute positions
/// ("at the 5th column, 4th row", "row 4 column 5 height 1"), relative board
/// positions ("at the top left of the board"), dependent placements ("next to
/// the blue screw", "on top"), counted groups ("a row of four purple
/// gaskets"), clause conjunctions, and naming/recall commands. Anything it
/// does not state is left null. Text outside the grammar yields Unparseable.
Result<std::vector<ParsedItem>> parse_instruction(std::string_view text);

// Fragment parsers used to read clarification answers. Each returns nullopt
// unless the answer names exactly one value of the requested type.
std::optional<PartKind> parse_part_answer(std::string_view text);
std::optional<Color> parse_color_answer(std::string_view text);
std::optional<int> parse_axis_answer(std::string_view text, Field axis);

} // namespace blockwright::grammar
