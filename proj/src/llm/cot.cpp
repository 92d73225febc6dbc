#include "blockwright/llm/cot.hpp"

#include <regex>

#include "blockwright/common/text.hpp"

namespace blockwright::llm {

namespace {

std::string unquote(std::string s) {
  s = text::trim(s);
  while (!s.empty() && (s.front() == '"' || s.front() == '\'')) s.erase(s.begin());
  while (!s.empty() && (s.back() == '"' || s.back() == '\'')) s.pop_back();
  return text::to_lower(text::trim(s));
}

} // namespace

Result<CotReply> parse_cot_reply(std::string_view text) {
  static const std::regex call(
      R"((place|remove)\s*\(\s*([^,()]+),\s*([^,()]+),\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\))",
      std::regex::icase);
  CotReply reply;
  const std::string body(text);
  for (auto it = std::sregex_iterator(body.begin(), body.end(), call); it != std::sregex_iterator(); ++it) {
    const auto &m = *it;
    const std::string verb = text::to_lower(m[1].str());
    const Cell cell{std::stoi(m[5].str()), std::stoi(m[4].str()), std::stoi(m[6].str())};
    if (verb == "remove") {
      reply.actions.emplace_back(RemoveAction{cell});
      continue;
    }
    auto kind = part_from_symbol(unquote(m[2].str()));
    auto color = color_from_symbol(unquote(m[3].str()));
    if (!kind) return make_error(Errc::MalformedOutput, "unknown part '" + m[2].str() + "'");
    if (!color) return make_error(Errc::MalformedOutput, "unknown color '" + m[3].str() + "'");
    reply.actions.emplace_back(PlaceAction{*kind, *color, cell});
  }
  if (reply.actions.empty()) {
    const std::string trimmed = text::trim(text);
    if (trimmed.find('?') != std::string::npos) reply.question = trimmed;
  }
  return reply;
}

} // namespace blockwright::llm
