#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace blockwright::llm::data {

/// (name, text) for every file under resources/prompts, embedded at build time.
const std::vector<std::pair<std::string_view, std::string_view>> &prompt_table();

} // namespace blockwright::llm::data
