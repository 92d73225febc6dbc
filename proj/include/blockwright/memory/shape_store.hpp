#pragma once

#include <filesystem>
#include <map>
#include <shared_mutex>
#include <string>
#include <vector>

#include "blockwright/common/result.hpp"
#include "blockwright/memory/shape_graph.hpp"

namespace blockwright::memory {

struct StoredShape {
  ShapeGraph graph;
  int version = 1;
};

/// Named shapes, keyed case-insensitively. Reads run concurrently; writes
/// are serialized.
class ShapeStore {
public:
  ShapeStore() = default;
  ShapeStore(const ShapeStore &other);
  ShapeStore &operator=(const ShapeStore &other);

  /// Stores under graph.name, replacing any earlier shape of that name with
  /// a bumped version. Returns the new version.
  Result<int> store(ShapeGraph graph);
  Result<StoredShape> retrieve(std::string_view name) const;
  bool contains(std::string_view name) const;

  /// Display names in key order.
  std::vector<std::string> names() const;
  std::size_t size() const;

  nlohmann::ordered_json to_json() const;
  static Result<ShapeStore> from_json(const nlohmann::json &j);

  Status save(const std::filesystem::path &path) const;
  static Result<ShapeStore> load(const std::filesystem::path &path);

private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, StoredShape> shapes_;
};

} // namespace blockwright::memory
