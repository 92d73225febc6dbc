#include "blockwright/memory/workflow.hpp"

#include <fstream>
#include <mutex>

#include "blockwright/common/text.hpp"

namespace blockwright::memory {

namespace {

nlohmann::ordered_json ordered(const nlohmann::json &j) { return nlohmann::ordered_json::parse(j.dump()); }

} // namespace

std::string WorkflowCall::to_string() const {
  std::vector<std::string> parts;
  for (const auto &a : args) parts.push_back(a.dump());
  return name + "(" + text::join(parts, ", ") + ")";
}

std::string WorkflowTemplate::signature() const {
  std::vector<std::string> parts;
  for (const auto &s : slots) parts.push_back(s.name);
  return name + "(" + text::join(parts, ", ") + ")";
}

Result<WorkflowTemplate> abstract_workflow(const WorkflowCall &example, const std::vector<Slot> &doc) {
  if (example.name.empty()) {
    return make_error(Errc::InvalidArgument, "workflow call has no name");
  }
  if (doc.size() != example.args.size()) {
    return make_error(Errc::SlotMismatch, example.name + " documents " + std::to_string(doc.size()) +
                                              " slots but the example passes " +
                                              std::to_string(example.args.size()));
  }
  std::size_t non_boolean = 0;
  for (const auto &a : example.args) non_boolean += a.is_boolean() ? 0 : 1;
  if (non_boolean < 2) {
    return make_error(Errc::InvalidArgument,
                      example.name + " needs at least two non-boolean arguments to abstract");
  }
  WorkflowTemplate out;
  out.name = example.name;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (doc[i].name.empty() || out.example_binding.count(doc[i].name) > 0) {
      return make_error(Errc::SlotMismatch, "slot names must be nonempty and distinct");
    }
    out.slots.push_back({doc[i].name, doc[i].role.empty() ? doc[i].name : doc[i].role});
    out.example_binding[doc[i].name] = example.args[i];
  }
  return out;
}

Result<WorkflowCall> apply_workflow(const WorkflowTemplate &tmpl, const Bindings &bindings) {
  WorkflowCall call{tmpl.name, {}};
  for (const auto &slot : tmpl.slots) {
    auto it = bindings.find(slot.name);
    if (it == bindings.end()) {
      return make_error(Errc::MissingBinding, slot.name);
    }
    call.args.push_back(it->second);
  }
  return call;
}

nlohmann::ordered_json call_to_json(const WorkflowCall &call) {
  nlohmann::ordered_json args = nlohmann::ordered_json::array();
  for (const auto &a : call.args) args.push_back(ordered(a));
  return {{"name", call.name}, {"args", args}};
}

Result<WorkflowCall> call_from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string() || !j.contains("args") ||
      !j.at("args").is_array()) {
    return make_error(Errc::MalformedOutput, "call must be {\"name\":..,\"args\":[..]}");
  }
  WorkflowCall call{j.at("name").get<std::string>(), {}};
  for (const auto &a : j.at("args")) call.args.push_back(a);
  return call;
}

nlohmann::ordered_json template_to_json(const WorkflowTemplate &tmpl) {
  nlohmann::ordered_json slots = nlohmann::ordered_json::array();
  nlohmann::ordered_json binding = nlohmann::ordered_json::object();
  for (const auto &s : tmpl.slots) {
    slots.push_back({{"name", s.name}, {"role", s.role}});
    binding[s.name] = ordered(tmpl.example_binding.at(s.name));
  }
  return {{"slots", slots}, {"example_binding", binding}};
}

Result<WorkflowTemplate> template_from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("slots") || !j.at("slots").is_array()) {
    return make_error(Errc::MalformedOutput, "template needs a slots array");
  }
  WorkflowTemplate out;
  out.name = j.value("name", "");
  for (const auto &s : j.at("slots")) {
    if (!s.is_object() || !s.contains("name") || !s.at("name").is_string()) {
      return make_error(Errc::MalformedOutput, "slot needs a name");
    }
    out.slots.push_back({s.at("name").get<std::string>(), s.value("role", s.at("name").get<std::string>())});
  }
  if (j.contains("example_binding") && j.at("example_binding").is_object()) {
    for (const auto &[k, v] : j.at("example_binding").items()) out.example_binding[k] = v;
  }
  for (const auto &s : out.slots) {
    if (out.example_binding.count(s.name) == 0) {
      return make_error(Errc::MalformedOutput, "example binding lacks slot " + s.name);
    }
  }
  return out;
}

WorkflowStore::WorkflowStore(const WorkflowStore &other) {
  std::shared_lock lock(other.mutex_);
  templates_ = other.templates_;
}

void WorkflowStore::store(WorkflowTemplate tmpl) {
  std::unique_lock lock(mutex_);
  const std::string key = tmpl.name;
  templates_[key] = std::move(tmpl);
}

Result<WorkflowTemplate> WorkflowStore::retrieve(std::string_view name) const {
  std::shared_lock lock(mutex_);
  auto it = templates_.find(std::string(name));
  if (it == templates_.end()) {
    return make_error(Errc::UnknownShape, "no workflow called '" + std::string(name) + "'");
  }
  return it->second;
}

std::vector<std::string> WorkflowStore::names() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto &[k, v] : templates_) out.push_back(k);
  return out;
}

nlohmann::ordered_json WorkflowStore::to_json() const {
  std::shared_lock lock(mutex_);
  nlohmann::ordered_json all = nlohmann::ordered_json::object();
  for (const auto &[k, v] : templates_) all[k] = template_to_json(v);
  return {{"format", 1}, {"workflows", all}};
}

Result<WorkflowStore> WorkflowStore::from_json(const nlohmann::json &j) {
  if (!j.is_object() || j.value("format", 0) != 1 || !j.contains("workflows") ||
      !j.at("workflows").is_object()) {
    return make_error(Errc::BadConfig, "workflow library must be {\"format\":1,\"workflows\":{...}}");
  }
  WorkflowStore out;
  for (const auto &[name, entry] : j.at("workflows").items()) {
    auto tmpl = template_from_json(entry);
    if (!tmpl) return make_error(Errc::BadConfig, "workflow '" + name + "': " + tmpl.error().message);
    tmpl.value().name = name;
    out.templates_[name] = std::move(tmpl).value();
  }
  return out;
}

Status WorkflowStore::save(const std::filesystem::path &path) const {
  std::ofstream out(path);
  if (!out) return make_error(Errc::Io, "cannot write " + path.string());
  out << to_json().dump(2) << '\n';
  return {};
}

Result<WorkflowStore> WorkflowStore::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) return make_error(Errc::BadConfig, "workflow library " + path.string() + " not found");
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) return make_error(Errc::BadConfig, path.string() + " is not valid JSON");
  return from_json(j);
}

} // namespace blockwright::memory
