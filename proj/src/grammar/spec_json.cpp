#include "blockwright/grammar/spec_json.hpp"

namespace blockwright::grammar {

namespace {

template <typename T>
ordered_json opt(const std::optional<T> &v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
ordered_json opt_symbol(const std::optional<T> &v) {
  return v ? ordered_json(std::string(to_symbol(*v))) : ordered_json(nullptr);
}

Error bad(const std::string &what) { return make_error(Errc::MalformedOutput, what); }

Result<std::optional<int>> read_int(const nlohmann::json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::optional<int>{};
  if (!j.at(key).is_number_integer()) return bad(std::string("'") + key + "' must be an integer");
  const int v = j.at(key).get<int>();
  if (!in_bounds(v)) return bad(std::string("'") + key + "' out of range");
  return std::optional<int>{v};
}

template <typename T, typename F>
Result<std::optional<T>> read_symbol(const nlohmann::json &j, const char *key, F parse) {
  if (!j.contains(key) || j.at(key).is_null()) return std::optional<T>{};
  if (!j.at(key).is_string()) return bad(std::string("'") + key + "' must be a string");
  auto v = parse(j.at(key).get<std::string>());
  if (!v) return bad(std::string("unknown ") + key + " '" + j.at(key).get<std::string>() + "'");
  return std::optional<T>{*v};
}

ordered_json anchor_to_json(const AnchorRef &ref) {
  ordered_json j;
  j["type"] = ref.type == AnchorRef::Type::Recent ? "recent" : "description";
  j["part"] = opt_symbol(ref.kind);
  j["color"] = opt_symbol(ref.color);
  return j;
}

Result<AnchorRef> anchor_from_json(const nlohmann::json &j) {
  if (!j.is_object()) return bad("relation target must be an object");
  AnchorRef ref;
  const std::string type = j.value("type", "recent");
  if (type == "description") {
    ref.type = AnchorRef::Type::Description;
  } else if (type != "recent") {
    return bad("unknown target type '" + type + "'");
  }
  auto kind = read_symbol<PartKind>(j, "part", part_from_symbol);
  if (!kind) return kind.error();
  auto color = read_symbol<Color>(j, "color", color_from_symbol);
  if (!color) return color.error();
  ref.kind = kind.value();
  ref.color = color.value();
  return ref;
}

} // namespace

ordered_json spec_to_json(const PartialPlacementSpec &spec, bool with_sources) {
  ordered_json j;
  j["kind"] = opt_symbol(spec.kind);
  j["color"] = opt_symbol(spec.color);
  j["x"] = opt(spec.x);
  j["y"] = opt(spec.y);
  j["z"] = opt(spec.z);
  j["x2"] = opt(spec.x2);
  j["y2"] = opt(spec.y2);
  j["relative"] = opt_symbol(spec.relative);
  if (spec.relation) {
    ordered_json rel;
    rel["kind"] = std::string(to_symbol(spec.relation->kind));
    rel["target"] = anchor_to_json(spec.relation->target);
    j["relation"] = rel;
  } else {
    j["relation"] = nullptr;
  }
  if (with_sources) {
    ordered_json sources = ordered_json::object();
    for (Field f : {Field::Kind, Field::Color, Field::X, Field::Y, Field::Z, Field::X2, Field::Y2}) {
      if (spec.source(f) != Source::Unset) {
        sources[std::string(field_name(f))] = std::string(source_name(spec.source(f)));
      }
    }
    j["sources"] = sources;
  }
  return j;
}

Result<PartialPlacementSpec> spec_from_json(const nlohmann::json &j) {
  if (!j.is_object()) return bad("spec must be an object");
  PartialPlacementSpec spec;
  auto kind = read_symbol<PartKind>(j, "kind", part_from_symbol);
  if (!kind) return kind.error();
  auto color = read_symbol<Color>(j, "color", color_from_symbol);
  if (!color) return color.error();
  auto relative = read_symbol<RelativeLabel>(j, "relative", relative_from_symbol);
  if (!relative) return relative.error();
  spec.kind = kind.value();
  spec.color = color.value();
  spec.relative = relative.value();
  for (auto [key, field] : {std::pair{"x", &spec.x}, std::pair{"y", &spec.y}, std::pair{"z", &spec.z},
                            std::pair{"x2", &spec.x2}, std::pair{"y2", &spec.y2}}) {
    auto v = read_int(j, key);
    if (!v) return v.error();
    *field = v.value();
  }
  if (j.contains("relation") && !j.at("relation").is_null()) {
    const auto &r = j.at("relation");
    if (!r.is_object()) return bad("relation must be an object");
    auto rk = read_symbol<RelationKind>(r, "kind", relation_from_symbol);
    if (!rk) return rk.error();
    if (!rk.value()) return bad("relation needs a kind");
    DependentRelation rel;
    rel.kind = *rk.value();
    if (r.contains("target") && !r.at("target").is_null()) {
      auto target = anchor_from_json(r.at("target"));
      if (!target) return target.error();
      rel.target = target.value();
    }
    spec.relation = rel;
  }
  if (j.contains("sources") && j.at("sources").is_object()) {
    for (const auto &[key, value] : j.at("sources").items()) {
      auto f = field_from_name(key);
      if (!f || !value.is_string()) return bad("bad sources entry '" + key + "'");
      for (Source s : {Source::Unset, Source::Utterance, Source::Answer, Source::Memory,
                       Source::Locator}) {
        if (source_name(s) == value.get<std::string>()) spec.set_source(*f, s);
      }
    }
  }
  return spec;
}

ordered_json command_to_json(const MemoryCommand &cmd) {
  ordered_json j;
  if (const auto *name = std::get_if<NameCommand>(&cmd)) {
    j["command"] = "name";
    j["name"] = name->name;
    return j;
  }
  const auto &recall = std::get<RecallCommand>(cmd);
  j["command"] = "recall";
  j["name"] = recall.name;
  j["target"] = spec_to_json(recall.target);
  j["color"] = opt_symbol(recall.color);
  j["part"] = opt_symbol(recall.part);
  if (recall.size) {
    ordered_json size;
    size["factor"] = opt(recall.size->factor);
    size["box"] = recall.size->box ? ordered_json(*recall.size->box) : ordered_json(nullptr);
    j["size"] = size;
  } else {
    j["size"] = nullptr;
  }
  return j;
}

Result<MemoryCommand> command_from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("command") || !j.at("command").is_string()) {
    return bad("command must carry a 'command' string");
  }
  if (!j.contains("name") || !j.at("name").is_string() || j.at("name").get<std::string>().empty()) {
    return bad("command needs a nonempty name");
  }
  const std::string verb = j.at("command").get<std::string>();
  const std::string name = j.at("name").get<std::string>();
  if (verb == "name") {
    return MemoryCommand{NameCommand{name}};
  }
  if (verb != "recall") {
    return bad("unknown command '" + verb + "'");
  }
  RecallCommand recall;
  recall.name = name;
  if (j.contains("target") && !j.at("target").is_null()) {
    auto target = spec_from_json(j.at("target"));
    if (!target) return target.error();
    recall.target = target.value();
  }
  auto color = read_symbol<Color>(j, "color", color_from_symbol);
  if (!color) return color.error();
  auto part = read_symbol<PartKind>(j, "part", part_from_symbol);
  if (!part) return part.error();
  recall.color = color.value();
  recall.part = part.value();
  if (j.contains("size") && !j.at("size").is_null()) {
    const auto &s = j.at("size");
    SizeOverride size;
    if (s.contains("factor") && s.at("factor").is_number_integer()) {
      size.factor = s.at("factor").get<int>();
    }
    if (s.contains("box") && s.at("box").is_array() && s.at("box").size() == 3) {
      std::array<int, 3> box{};
      for (std::size_t i = 0; i < 3; ++i) {
        if (!s.at("box")[i].is_number_integer()) return bad("size box must hold integers");
        box[i] = s.at("box")[i].get<int>();
      }
      size.box = box;
    }
    if (!size.factor && !size.box) return bad("size needs a factor or a box");
    recall.size = size;
  }
  return MemoryCommand{std::move(recall)};
}

ordered_json item_to_json(const ParsedItem &item) {
  if (const auto *spec = std::get_if<PartialPlacementSpec>(&item)) {
    return spec_to_json(*spec);
  }
  return command_to_json(std::get<MemoryCommand>(item));
}

Result<ParsedItem> item_from_json(const nlohmann::json &j) {
  if (j.is_object() && j.contains("command")) {
    auto cmd = command_from_json(j);
    if (!cmd) return cmd.error();
    return ParsedItem{std::move(cmd).value()};
  }
  auto spec = spec_from_json(j);
  if (!spec) return spec.error();
  return ParsedItem{std::move(spec).value()};
}

} // namespace blockwright::grammar
