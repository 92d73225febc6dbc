#include "blockwright/llm/prompts.hpp"

#include <array>

#include "blockwright/llm/prompts_data.hpp"

namespace blockwright::llm {

std::string_view role_name(Role role) {
  switch (role) {
  case Role::Parser: return "parser";
  case Role::Locator: return "locator";
  case Role::Abstractor: return "abstractor";
  case Role::Cot: return "cot";
  }
  return "parser";
}

Result<Role> role_from_name(std::string_view name) {
  for (Role r : {Role::Parser, Role::Locator, Role::Abstractor, Role::Cot}) {
    if (role_name(r) == name) return r;
  }
  return make_error(Errc::BadConfig, "unknown agent role '" + std::string(name) + "'");
}

std::string_view prompt_resource(std::string_view name) {
  for (const auto &[key, text] : data::prompt_table()) {
    if (key == name) return text;
  }
  return {};
}

namespace {

AgentPrompt build(Role role) {
  AgentPrompt p;
  p.role = role;
  // Resource files end with a newline; the spliced copy drops it.
  std::string env(prompt_resource("environment"));
  while (!env.empty() && env.back() == '\n') env.pop_back();
  p.environment = env;
  p.system = std::string(prompt_resource(role_name(role)));
  const std::string marker = "{environment}";
  if (auto pos = p.system.find(marker); pos != std::string::npos) {
    p.system.replace(pos, marker.size(), env);
  }
  return p;
}

} // namespace

const AgentPrompt &prompt_for(Role role) {
  static const std::array<AgentPrompt, 4> prompts = {build(Role::Parser), build(Role::Locator),
                                                     build(Role::Abstractor), build(Role::Cot)};
  return prompts[static_cast<std::size_t>(role)];
}

} // namespace blockwright::llm
