#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockwright/common/result.hpp"
#include "blockwright/grid/grid_state.hpp"

namespace blockwright::llm {

/// A single-model reply: either actions or a clarifying question.
struct CotReply {
  std::vector<Action> actions;
  std::optional<std::string> question;
};

/// Reads place(part, color, row, column, height) and remove(...) lines.
/// Rows map to y and columns to x. Text without any action line is taken
/// as a question when it contains one, otherwise as an empty plan.
Result<CotReply> parse_cot_reply(std::string_view text);

} // namespace blockwright::llm
