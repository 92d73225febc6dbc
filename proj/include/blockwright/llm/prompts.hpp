#pragma once

#include <string>
#include <string_view>

#include "blockwright/common/result.hpp"

namespace blockwright::llm {

enum class Role { Parser, Locator, Abstractor, Cot };

std::string_view role_name(Role role);
Result<Role> role_from_name(std::string_view name);

struct AgentPrompt {
  Role role = Role::Parser;
  std::string system;      // full system message, environment text spliced in
  std::string environment; // shared board description
};

/// Prompt for a role, built from the embedded resource texts.
const AgentPrompt &prompt_for(Role role);

/// Raw embedded resource by file stem ("parser", "environment", ...).
std::string_view prompt_resource(std::string_view name);

} // namespace blockwright::llm
