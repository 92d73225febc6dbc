#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "blockwright/common/result.hpp"

namespace blockwright::llm {

enum class Schema { Structures, Instruction, PythonFunction };

struct StructurePlan {
  std::string plan;
  std::string name;

  bool operator==(const StructurePlan &) const = default;
};

/// Pulls the JSON value out of model text: code fences and any prose around
/// the outermost object are dropped, then the value is parsed strictly and
/// checked for the schema's required keys. Never throws.
Result<nlohmann::json> extract_json(std::string_view text, Schema schema);

Result<std::vector<StructurePlan>> extract_structures(std::string_view text);
Result<std::string> extract_instruction(std::string_view text);

/// Source of the first Python function definition in the text.
Result<std::string> extract_function(std::string_view text);

} // namespace blockwright::llm
