#include "blockwright/llm/extract.hpp"

#include <cctype>

#include "blockwright/common/text.hpp"

namespace blockwright::llm {

namespace {

Error malformed(const std::string &why) { return make_error(Errc::MalformedOutput, why); }

// Body of the first ``` fence, or the text itself when there is none.
std::string strip_fence(std::string_view text) {
  const auto open = text.find("```");
  if (open == std::string_view::npos) return std::string(text);
  auto body_start = text.find('\n', open);
  if (body_start == std::string_view::npos) {
    body_start = open + 3;
    // One-line fence: skip an info word such as "json".
    while (body_start < text.size() && std::isalpha(static_cast<unsigned char>(text[body_start]))) {
      ++body_start;
    }
  } else {
    const std::string_view info = text.substr(open + 3, body_start - open - 3);
    if (info.find('{') != std::string_view::npos) body_start = open + 3;
  }
  const auto close = text.find("```", body_start);
  return std::string(text.substr(body_start, close == std::string_view::npos ? std::string_view::npos
                                                                              : close - body_start));
}

} // namespace

Result<nlohmann::json> extract_json(std::string_view text, Schema schema) {
  if (schema == Schema::PythonFunction) {
    auto fn = extract_function(text);
    if (!fn) return fn.error();
    return nlohmann::json(fn.value());
  }
  std::string body = text::trim(strip_fence(text));
  const auto first = body.find('{');
  const auto last = body.rfind('}');
  if (first == std::string::npos || last == std::string::npos || last < first) {
    return malformed("no JSON object in output");
  }
  body = body.substr(first, last - first + 1);
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) return malformed("output is not valid JSON");
  if (!j.is_object()) return malformed("output is not a JSON object");

  if (schema == Schema::Structures) {
    if (!j.contains("structures") || !j.at("structures").is_array()) {
      return malformed("missing 'structures' list");
    }
    for (const auto &s : j.at("structures")) {
      if (!s.is_object() || !s.contains("plan") || !s.at("plan").is_string() || !s.contains("name") ||
          !s.at("name").is_string()) {
        return malformed("each structure needs string 'plan' and 'name'");
      }
    }
  } else if (!j.contains("instruction") || !j.at("instruction").is_string()) {
    return malformed("missing 'instruction' string");
  }
  return j;
}

Result<std::vector<StructurePlan>> extract_structures(std::string_view text) {
  auto j = extract_json(text, Schema::Structures);
  if (!j) return j.error();
  std::vector<StructurePlan> out;
  for (const auto &s : j.value().at("structures")) {
    out.push_back({s.at("plan").get<std::string>(), s.at("name").get<std::string>()});
  }
  return out;
}

Result<std::string> extract_instruction(std::string_view text) {
  auto j = extract_json(text, Schema::Instruction);
  if (!j) return j.error();
  return j.value().at("instruction").get<std::string>();
}

Result<std::string> extract_function(std::string_view text) {
  const std::string body = strip_fence(text);
  const auto def = body.find("def ");
  if (def == std::string::npos) return malformed("no Python function definition");
  const auto paren = body.find('(', def);
  if (paren == std::string::npos || body.find(':', paren) == std::string::npos) {
    return malformed("incomplete function header");
  }
  std::string out = body.substr(def);
  while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
  return out;
}

} // namespace blockwright::llm
