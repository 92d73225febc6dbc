#include "blockwright/memory/shape_store.hpp"

#include <fstream>
#include <mutex>

#include "blockwright/common/text.hpp"

namespace blockwright::memory {

namespace {

std::string key_of(std::string_view name) { return text::to_lower(text::trim(name)); }

} // namespace

ShapeStore::ShapeStore(const ShapeStore &other) {
  std::shared_lock lock(other.mutex_);
  shapes_ = other.shapes_;
}

ShapeStore &ShapeStore::operator=(const ShapeStore &other) {
  if (this != &other) {
    std::map<std::string, StoredShape> copy;
    {
      std::shared_lock lock(other.mutex_);
      copy = other.shapes_;
    }
    std::unique_lock lock(mutex_);
    shapes_ = std::move(copy);
  }
  return *this;
}

Result<int> ShapeStore::store(ShapeGraph graph) {
  const std::string key = key_of(graph.name);
  if (key.empty()) {
    return make_error(Errc::InvalidArgument, "shape name must not be empty");
  }
  if (graph.nodes.empty()) {
    return make_error(Errc::InvalidArgument, "shape '" + graph.name + "' has no parts");
  }
  graph.name = text::trim(graph.name);
  std::unique_lock lock(mutex_);
  auto it = shapes_.find(key);
  const int version = it == shapes_.end() ? 1 : it->second.version + 1;
  shapes_[key] = StoredShape{std::move(graph), version};
  return version;
}

Result<StoredShape> ShapeStore::retrieve(std::string_view name) const {
  std::shared_lock lock(mutex_);
  auto it = shapes_.find(key_of(name));
  if (it == shapes_.end()) {
    return make_error(Errc::UnknownShape, "no shape called '" + std::string(name) + "'");
  }
  return it->second;
}

bool ShapeStore::contains(std::string_view name) const {
  std::shared_lock lock(mutex_);
  return shapes_.count(key_of(name)) > 0;
}

std::vector<std::string> ShapeStore::names() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto &[key, shape] : shapes_) out.push_back(shape.graph.name);
  return out;
}

std::size_t ShapeStore::size() const {
  std::shared_lock lock(mutex_);
  return shapes_.size();
}

nlohmann::ordered_json ShapeStore::to_json() const {
  std::shared_lock lock(mutex_);
  nlohmann::ordered_json shapes = nlohmann::ordered_json::object();
  for (const auto &[key, shape] : shapes_) {
    auto entry = graph_to_json(shape.graph);
    entry["version"] = shape.version;
    shapes[shape.graph.name] = entry;
  }
  return {{"format", 1}, {"shapes", shapes}};
}

Result<ShapeStore> ShapeStore::from_json(const nlohmann::json &j) {
  if (!j.is_object() || j.value("format", 0) != 1 || !j.contains("shapes") ||
      !j.at("shapes").is_object()) {
    return make_error(Errc::BadConfig, "shape library must be {\"format\":1,\"shapes\":{...}}");
  }
  ShapeStore out;
  for (const auto &[name, entry] : j.at("shapes").items()) {
    auto graph = graph_from_json(entry);
    if (!graph) return make_error(Errc::BadConfig, "shape '" + name + "': " + graph.error().message);
    graph.value().name = name;
    const int version = entry.value("version", 1);
    out.shapes_[key_of(name)] = StoredShape{std::move(graph).value(), version};
  }
  return out;
}

Status ShapeStore::save(const std::filesystem::path &path) const {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return make_error(Errc::Io, "cannot write " + tmp);
    out << to_json().dump(2) << '\n';
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) return make_error(Errc::Io, "cannot replace " + path.string() + ": " + ec.message());
  return {};
}

Result<ShapeStore> ShapeStore::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) return make_error(Errc::BadConfig, "shape library " + path.string() + " not found");
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) return make_error(Errc::BadConfig, path.string() + " is not valid JSON");
  return from_json(j);
}

} // namespace blockwright::memory
