#include "blockwright/memory/shape_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>
#include <utility>

namespace blockwright::memory {

namespace {

// Position of a part's n-th cell relative to its anchor.
Cell cell_offset(PartKind kind, int n) {
  if (n == 0) return {0, 0, 0};
  if (kind == PartKind::HorizontalBridge) return {1, 0, 0};
  if (kind == PartKind::VerticalBridge) return {0, 1, 0};
  return {0, 0, 0};
}

int cell_count(PartKind kind) { return is_bridge(kind) ? 2 : 1; }

std::size_t direction_rank(Direction d) {
  return static_cast<std::size_t>(std::find(kAllDirections.begin(), kAllDirections.end(), d) -
                                  kAllDirections.begin());
}

Error bad(const std::string &what) { return make_error(Errc::MalformedOutput, what); }

} // namespace

ShapeGraph to_graph(const std::vector<PlacedPart> &structure, std::string name) {
  ShapeGraph g;
  g.name = std::move(name);
  g.nodes.resize(structure.size());

  std::map<Cell, std::pair<std::size_t, int>> owner;
  for (std::size_t i = 0; i < structure.size(); ++i) {
    g.nodes[i].kind = structure[i].kind;
    g.nodes[i].color = structure[i].color;
    for (std::size_t c = 0; c < structure[i].cells.size(); ++c) {
      owner[structure[i].cells[c]] = {i, static_cast<int>(c)};
    }
  }
  for (std::size_t i = 0; i < structure.size(); ++i) {
    for (std::size_t c = 0; c < structure[i].cells.size(); ++c) {
      for (Direction dir : kAllDirections) {
        const auto it = owner.find(structure[i].cells[c] + delta(dir));
        if (it == owner.end() || it->second.first == i) continue;
        g.nodes[i].edges.push_back({it->second.first, dir, static_cast<int>(c), it->second.second});
      }
    }
  }

  std::vector<bool> seen(structure.size(), false);
  std::vector<Cell> first_anchors;
  for (std::size_t start = 0; start < structure.size(); ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> members;
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      const std::size_t n = queue.front();
      queue.pop_front();
      members.push_back(n);
      for (const auto &e : g.nodes[n].edges) {
        if (!seen[e.to]) {
          seen[e.to] = true;
          queue.push_back(e.to);
        }
      }
    }
    g.components.push_back(std::move(members));
    g.firsts.push_back(start);
    first_anchors.push_back(structure[start].anchor);
  }
  g.offsets = component_offsets(first_anchors);
  if (!first_anchors.empty()) g.origin = first_anchors.front();
  return g;
}

std::vector<Cell> component_offsets(const std::vector<Cell> &first_anchors) {
  std::vector<Cell> out;
  out.reserve(first_anchors.size());
  for (const Cell &c : first_anchors) {
    out.push_back(c - first_anchors.front());
  }
  return out;
}

Status validate_graph(const ShapeGraph &g) {
  const std::size_t n = g.nodes.size();
  if (g.components.size() != g.firsts.size() || g.components.size() != g.offsets.size()) {
    return make_error(Errc::InvalidArgument, "components, firsts and offsets disagree in length");
  }
  if (!g.offsets.empty() && g.offsets.front() != Cell{0, 0, 0}) {
    return make_error(Errc::InvalidArgument, "first offset must be zero");
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto &e : g.nodes[u].edges) {
      if (e.to >= n || e.to == u) return make_error(Errc::InvalidArgument, "edge to invalid node");
      if (e.from_cell >= cell_count(g.nodes[u].kind) || e.to_cell >= cell_count(g.nodes[e.to].kind)) {
        return make_error(Errc::InvalidArgument, "edge names a missing bridge cell");
      }
      const GraphEdge back{u, opposite(e.dir), e.to_cell, e.from_cell};
      const auto &rev = g.nodes[e.to].edges;
      if (std::find(rev.begin(), rev.end(), back) == rev.end()) {
        return make_error(Errc::InvalidArgument, "edge " + std::to_string(u) + "->" +
                                                     std::to_string(e.to) + " has no reverse");
      }
    }
  }
  std::vector<int> component_of(n, -1);
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    for (std::size_t v : g.components[c]) {
      if (v >= n || component_of[v] != -1) {
        return make_error(Errc::InvalidArgument, "node listed in two components");
      }
      component_of[v] = static_cast<int>(c);
    }
    if (std::find(g.components[c].begin(), g.components[c].end(), g.firsts[c]) ==
        g.components[c].end()) {
      return make_error(Errc::InvalidArgument, "first node outside its component");
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (component_of[v] == -1) return make_error(Errc::InvalidArgument, "node in no component");
    for (const auto &e : g.nodes[v].edges) {
      if (component_of[e.to] != component_of[v]) {
        return make_error(Errc::InvalidArgument, "edge crosses components");
      }
    }
  }
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    std::vector<bool> reached(n, false);
    std::deque<std::size_t> queue{g.firsts[c]};
    reached[g.firsts[c]] = true;
    std::size_t count = 0;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      ++count;
      for (const auto &e : g.nodes[u].edges) {
        if (!reached[e.to]) {
          reached[e.to] = true;
          queue.push_back(e.to);
        }
      }
    }
    if (count != g.components[c].size()) {
      return make_error(Errc::InvalidArgument, "component " + std::to_string(c) + " is disconnected");
    }
  }
  return {};
}

Result<std::vector<PlaceAction>> apply_at(const ShapeGraph &g, Cell start,
                                          const ApplyOverrides &overrides) {
  if (overrides.part && is_bridge(*overrides.part)) {
    return make_error(Errc::InvalidOverride, "a shape cannot be rebuilt out of bridges");
  }
  std::vector<std::optional<Cell>> anchor(g.nodes.size());
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    const std::size_t first = g.firsts[c];
    anchor[first] = start + g.offsets[c];
    std::deque<std::size_t> queue{first};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      order.push_back(u);
      std::vector<const GraphEdge *> edges;
      for (const auto &e : g.nodes[u].edges) edges.push_back(&e);
      std::stable_sort(edges.begin(), edges.end(), [](const GraphEdge *a, const GraphEdge *b) {
        return std::pair(direction_rank(a->dir), a->to) < std::pair(direction_rank(b->dir), b->to);
      });
      for (const GraphEdge *e : edges) {
        if (anchor[e->to]) continue;
        const Cell touching = *anchor[u] + cell_offset(g.nodes[u].kind, e->from_cell) + delta(e->dir);
        anchor[e->to] = touching - cell_offset(g.nodes[e->to].kind, e->to_cell);
        queue.push_back(e->to);
      }
    }
  }

  std::vector<PlaceAction> out;
  out.reserve(order.size());
  for (std::size_t u : order) {
    if (!anchor[u]) {
      return make_error(Errc::InvalidArgument, "node " + std::to_string(u) + " unreachable");
    }
    PlaceAction a{g.nodes[u].kind, g.nodes[u].color, *anchor[u]};
    if (overrides.color) a.color = *overrides.color;
    if (overrides.part && !is_bridge(a.kind)) a.kind = *overrides.part;
    out.push_back(a);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PlaceAction &a, const PlaceAction &b) { return a.anchor.z < b.anchor.z; });

  if (overrides.factor || overrides.box) {
    Cell lo{kGridSize * 4, kGridSize * 4, kGridSize * 4};
    Cell hi{-kGridSize * 4, -kGridSize * 4, -kGridSize * 4};
    for (const auto &a : out) {
      lo = {std::min(lo.x, a.anchor.x), std::min(lo.y, a.anchor.y), std::min(lo.z, a.anchor.z)};
      hi = {std::max(hi.x, a.anchor.x), std::max(hi.y, a.anchor.y), std::max(hi.z, a.anchor.z)};
    }
    std::array<int, 3> box{};
    if (overrides.box) {
      box = *overrides.box;
    } else {
      const int f = *overrides.factor;
      if (f < 1) return make_error(Errc::InvalidOverride, "scale factor must be at least 1");
      box = {(hi.x - lo.x + 1) * f, (hi.y - lo.y + 1) * f, (hi.z - lo.z + 1) * f};
    }
    auto scaled = scale_shape(out, box);
    if (!scaled) return scaled.error();
    out = std::move(scaled).value();
  }

  for (const auto &a : out) {
    for (int n = 0; n < cell_count(a.kind); ++n) {
      const Cell c = a.anchor + cell_offset(a.kind, n);
      if (!in_bounds(c)) {
        return make_error(Errc::OutOfBounds, "shape cell " + c.to_string() + " is outside the grid");
      }
    }
  }
  return out;
}

Result<std::vector<PlaceAction>> scale_shape(const std::vector<PlaceAction> &structure,
                                             std::array<int, 3> box) {
  for (int v : box) {
    if (v < 1 || v > kGridSize) {
      return make_error(Errc::OutOfBounds, "target box side " + std::to_string(v) + " not in 1..16");
    }
  }
  if (structure.empty()) return structure;
  std::map<Cell, const PlaceAction *> source;
  Cell lo = structure.front().anchor;
  Cell hi = lo;
  for (const auto &a : structure) {
    if (is_bridge(a.kind)) {
      return make_error(Errc::InvalidOverride, "bridges cannot be resized");
    }
    source[a.anchor] = &a;
    lo = {std::min(lo.x, a.anchor.x), std::min(lo.y, a.anchor.y), std::min(lo.z, a.anchor.z)};
    hi = {std::max(hi.x, a.anchor.x), std::max(hi.y, a.anchor.y), std::max(hi.z, a.anchor.z)};
  }
  const std::array<int, 3> size = {hi.x - lo.x + 1, hi.y - lo.y + 1, hi.z - lo.z + 1};
  auto src = [&](int t, int axis) { return t * size[axis] / box[axis]; };

  std::vector<PlaceAction> out;
  for (int tz = 0; tz < box[2]; ++tz) {
    for (int ty = 0; ty < box[1]; ++ty) {
      for (int tx = 0; tx < box[0]; ++tx) {
        const Cell from = lo + Cell{src(tx, 0), src(ty, 1), src(tz, 2)};
        const auto it = source.find(from);
        if (it == source.end()) continue;
        out.push_back({it->second->kind, it->second->color, lo + Cell{tx, ty, tz}});
      }
    }
  }
  return out;
}

bool shapes_equivalent(const std::vector<PlacedPart> &a, const std::vector<PlacedPart> &b,
                       bool compare_color) {
  if (a.size() != b.size()) return false;
  auto normalize = [compare_color](const std::vector<PlacedPart> &s) {
    Cell lo{1 << 20, 1 << 20, 1 << 20};
    for (const auto &p : s) {
      lo = {std::min(lo.x, p.anchor.x), std::min(lo.y, p.anchor.y), std::min(lo.z, p.anchor.z)};
    }
    std::vector<std::tuple<Cell, int, int>> keyed;
    for (const auto &p : s) {
      keyed.emplace_back(p.anchor - lo, static_cast<int>(p.kind),
                         compare_color ? static_cast<int>(p.color) : 0);
    }
    std::sort(keyed.begin(), keyed.end());
    return keyed;
  };
  return normalize(a) == normalize(b);
}

std::vector<PlacedPart> as_parts(const std::vector<PlaceAction> &actions) {
  std::vector<PlacedPart> out;
  out.reserve(actions.size());
  PartId id = 1;
  for (const auto &a : actions) {
    PlacedPart p{id++, a.kind, a.color, a.anchor, {}};
    for (int n = 0; n < cell_count(a.kind); ++n) p.cells.push_back(a.anchor + cell_offset(a.kind, n));
    out.push_back(std::move(p));
  }
  return out;
}

nlohmann::ordered_json graph_to_json(const ShapeGraph &g) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["name"] = g.name;
  j["origin"] = {g.origin.x, g.origin.y, g.origin.z};
  ordered_json nodes = ordered_json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    ordered_json node;
    node["id"] = i;
    node["part"] = std::string(to_symbol(g.nodes[i].kind));
    node["color"] = std::string(to_symbol(g.nodes[i].color));
    ordered_json edges = ordered_json::array();
    for (const auto &e : g.nodes[i].edges) {
      edges.push_back({{"to", e.to},
                       {"dir", std::string(direction_label(e.dir))},
                       {"from_cell", e.from_cell},
                       {"to_cell", e.to_cell}});
    }
    node["edges"] = edges;
    nodes.push_back(node);
  }
  j["nodes"] = nodes;
  ordered_json components = ordered_json::array();
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    components.push_back({{"first", g.firsts[c]},
                          {"offset", {g.offsets[c].x, g.offsets[c].y, g.offsets[c].z}},
                          {"nodes", g.components[c]}});
  }
  j["components"] = components;
  return j;
}

Result<ShapeGraph> graph_from_json(const nlohmann::json &j) {
  try {
    ShapeGraph g;
    g.name = j.value("name", "");
    const auto &o = j.at("origin");
    g.origin = {o.at(0).get<int>(), o.at(1).get<int>(), o.at(2).get<int>()};
    for (const auto &node : j.at("nodes")) {
      GraphNode n;
      auto kind = part_from_symbol(node.at("part").get<std::string>());
      auto color = color_from_symbol(node.at("color").get<std::string>());
      if (!kind || !color) return bad("unknown part or color in shape graph");
      n.kind = *kind;
      n.color = *color;
      for (const auto &e : node.at("edges")) {
        auto dir = direction_from_label(e.at("dir").get<std::string>());
        if (!dir) return bad("unknown direction in shape graph");
        n.edges.push_back({e.at("to").get<std::size_t>(), *dir, e.at("from_cell").get<int>(),
                           e.at("to_cell").get<int>()});
      }
      g.nodes.push_back(std::move(n));
    }
    for (const auto &c : j.at("components")) {
      g.firsts.push_back(c.at("first").get<std::size_t>());
      const auto &off = c.at("offset");
      g.offsets.push_back({off.at(0).get<int>(), off.at(1).get<int>(), off.at(2).get<int>()});
      g.components.push_back(c.at("nodes").get<std::vector<std::size_t>>());
    }
    if (auto ok = validate_graph(g); !ok) return bad(ok.error().message);
    return g;
  } catch (const nlohmann::json::exception &e) {
    return bad(std::string("shape graph: ") + e.what());
  }
}

} // namespace blockwright::memory
