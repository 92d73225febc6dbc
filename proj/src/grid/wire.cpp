#include "blockwright/grid/wire.hpp"

namespace blockwright::wire {

namespace {

Result<int> read_index(const nlohmann::json &j, const char *key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    return make_error(Errc::MalformedOutput, std::string("missing integer field '") + key + "'");
  }
  return j.at(key).get<int>();
}

Result<std::string> read_string(const nlohmann::json &j, const char *key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    return make_error(Errc::MalformedOutput, std::string("missing string field '") + key + "'");
  }
  return j.at(key).get<std::string>();
}

} // namespace

ordered_json action_to_json(const Action &action) {
  ordered_json j;
  if (const auto *p = std::get_if<PlaceAction>(&action)) {
    j["action"] = "place";
    j["part"] = std::string(to_symbol(p->kind));
    j["color"] = std::string(to_symbol(p->color));
    j["x"] = p->anchor.x;
    j["y"] = p->anchor.y;
    j["z"] = p->anchor.z;
    if (p->kind == PartKind::HorizontalBridge) {
      j["x2"] = p->anchor.x + 1;
    } else if (p->kind == PartKind::VerticalBridge) {
      j["y2"] = p->anchor.y + 1;
    }
    return j;
  }
  const auto &r = std::get<RemoveAction>(action);
  j["action"] = "remove";
  j["x"] = r.cell.x;
  j["y"] = r.cell.y;
  j["z"] = r.cell.z;
  return j;
}

Result<Action> action_from_json(const nlohmann::json &j) {
  if (!j.is_object()) {
    return make_error(Errc::MalformedOutput, "action must be an object");
  }
  auto verb = read_string(j, "action");
  auto x = read_index(j, "x");
  auto y = read_index(j, "y");
  auto z = read_index(j, "z");
  if (!verb.ok()) return verb.error();
  if (!x.ok()) return x.error();
  if (!y.ok()) return y.error();
  if (!z.ok()) return z.error();
  const Cell cell{x.value(), y.value(), z.value()};

  if (verb.value() == "remove") {
    return Action{RemoveAction{cell}};
  }
  if (verb.value() != "place") {
    return make_error(Errc::MalformedOutput, "unknown action '" + verb.value() + "'");
  }
  auto part = read_string(j, "part");
  auto color = read_string(j, "color");
  if (!part.ok()) return part.error();
  if (!color.ok()) return color.error();
  const auto kind = part_from_symbol(part.value());
  const auto hue = color_from_symbol(color.value());
  if (!kind) {
    return make_error(Errc::MalformedOutput, "unknown part '" + part.value() + "'");
  }
  if (!hue) {
    return make_error(Errc::MalformedOutput, "unknown color '" + color.value() + "'");
  }
  const bool wants_x2 = *kind == PartKind::HorizontalBridge;
  const bool wants_y2 = *kind == PartKind::VerticalBridge;
  if (j.contains("x2") != wants_x2 || j.contains("y2") != wants_y2) {
    return make_error(Errc::MalformedOutput, "second bridge index does not match part kind");
  }
  if (wants_x2 && j.at("x2") != cell.x + 1) {
    return make_error(Errc::MalformedOutput, "x2 must be x+1");
  }
  if (wants_y2 && j.at("y2") != cell.y + 1) {
    return make_error(Errc::MalformedOutput, "y2 must be y+1");
  }
  return Action{PlaceAction{*kind, *hue, cell}};
}

ordered_json part_to_json(const PlacedPart &part) {
  ordered_json j;
  j["id"] = part.id;
  j["part"] = std::string(to_symbol(part.kind));
  j["color"] = std::string(to_symbol(part.color));
  j["x"] = part.anchor.x;
  j["y"] = part.anchor.y;
  j["z"] = part.anchor.z;
  ordered_json cells = ordered_json::array();
  for (const Cell &c : part.cells) {
    cells.push_back({c.x, c.y, c.z});
  }
  j["cells"] = std::move(cells);
  return j;
}

Result<PlacedPart> part_from_json(const nlohmann::json &j) {
  if (!j.is_object()) {
    return make_error(Errc::MalformedOutput, "part must be an object");
  }
  auto part = read_string(j, "part");
  auto color = read_string(j, "color");
  auto x = read_index(j, "x");
  auto y = read_index(j, "y");
  auto z = read_index(j, "z");
  if (!part.ok()) return part.error();
  if (!color.ok()) return color.error();
  if (!x.ok()) return x.error();
  if (!y.ok()) return y.error();
  if (!z.ok()) return z.error();
  const auto kind = part_from_symbol(part.value());
  const auto hue = color_from_symbol(color.value());
  if (!kind || !hue) {
    return make_error(Errc::MalformedOutput, "unknown part or color");
  }
  PlacedPart out;
  out.id = j.contains("id") && j.at("id").is_number_unsigned() ? j.at("id").get<PartId>() : 0;
  out.kind = *kind;
  out.color = *hue;
  out.anchor = {x.value(), y.value(), z.value()};
  auto cells = footprint(out.kind, out.anchor);
  if (!cells.ok()) {
    return cells.error();
  }
  out.cells = std::move(cells).value();
  return out;
}

ordered_json snapshot(const GridState &state) {
  ordered_json out = ordered_json::array();
  for (const auto &[id, part] : state.parts()) {
    out.push_back(part_to_json(part));
  }
  return out;
}

std::string snapshot_string(const GridState &state) { return snapshot(state).dump(); }

} // namespace blockwright::wire
