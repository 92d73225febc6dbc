#include "oracles/oracles.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace oracle {

using namespace blockwright;

std::vector<Cell> cells_of(PartKind kind, Cell anchor) {
  if (kind == PartKind::HorizontalBridge) return {anchor, {anchor.x + 1, anchor.y, anchor.z}};
  if (kind == PartKind::VerticalBridge) return {anchor, {anchor.x, anchor.y + 1, anchor.z}};
  return {anchor};
}

bool supported_by(const std::vector<PlacedPart> &parts, PartKind kind, const std::vector<Cell> &cells) {
  int resting = 0;
  for (const Cell &c : cells) {
    bool ok = c.z == 1;
    for (const auto &p : parts) {
      for (const Cell &q : p.cells) {
        if (q.x == c.x && q.y == c.y && q.z == c.z - 1) ok = true;
      }
    }
    resting += ok ? 1 : 0;
  }
  const bool bridge = kind == PartKind::HorizontalBridge || kind == PartKind::VerticalBridge;
  return bridge ? resting >= 1 : resting == static_cast<int>(cells.size());
}

PartKind random_kind(std::mt19937 &rng, bool bridges) {
  static const PartKind kinds[] = {PartKind::Screw,  PartKind::Nut,    PartKind::Washer,
                                   PartKind::Bolt,   PartKind::Gasket, PartKind::HexNut,
                                   PartKind::SquareNut, PartKind::HorizontalBridge,
                                   PartKind::VerticalBridge};
  const unsigned n = bridges ? 9 : 7;
  return kinds[rng() % n];
}

Color random_color(std::mt19937 &rng) { return static_cast<Color>(rng() % 10); }

std::vector<PlacedPart> random_structure(std::mt19937 &rng, int parts, int box, bool bridges) {
  std::vector<PlacedPart> out;
  std::set<Cell> taken;
  int attempts = 0;
  while (static_cast<int>(out.size()) < parts && attempts < parts * 200) {
    ++attempts;
    const PartKind kind = random_kind(rng, bridges);
    Cell anchor{1 + static_cast<int>(rng() % box), 1 + static_cast<int>(rng() % box), 1};
    // Drop: lowest z above every occupied cell in the footprint's columns.
    auto cells = cells_of(kind, anchor);
    bool fits = true;
    int top = 0;
    for (const Cell &c : cells) {
      if (c.x > box || c.y > box) fits = false;
      for (const Cell &t : taken) {
        if (t.x == c.x && t.y == c.y) top = std::max(top, t.z);
      }
    }
    if (!fits || top + 1 > box) continue;
    anchor.z = top + 1;
    cells = cells_of(kind, anchor);
    if (!supported_by(out, kind, cells)) continue;
    PlacedPart p;
    p.id = static_cast<PartId>(out.size() + 1);
    p.kind = kind;
    p.color = random_color(rng);
    p.anchor = anchor;
    p.cells = cells;
    for (const Cell &c : cells) taken.insert(c);
    out.push_back(p);
  }
  return out;
}

std::vector<std::set<std::size_t>> components(const std::vector<PlacedPart> &parts) {
  std::vector<std::size_t> label(parts.size());
  std::iota(label.begin(), label.end(), 0);
  auto touching = [](const PlacedPart &a, const PlacedPart &b) {
    for (const Cell &p : a.cells) {
      for (const Cell &q : b.cells) {
        const int d = std::abs(p.x - q.x) + std::abs(p.y - q.y) + std::abs(p.z - q.z);
        if (d == 1) return true;
      }
    }
    return false;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (std::size_t j = 0; j < parts.size(); ++j) {
        if (label[i] != label[j] && touching(parts[i], parts[j])) {
          const std::size_t m = std::min(label[i], label[j]);
          if (label[i] != m || label[j] != m) changed = true;
          label[i] = label[j] = m;
        }
      }
    }
  }
  std::map<std::size_t, std::set<std::size_t>> groups;
  for (std::size_t i = 0; i < parts.size(); ++i) groups[label[i]].insert(i);
  std::vector<std::set<std::size_t>> out;
  for (auto &[k, v] : groups) out.push_back(v);
  return out;
}

bool bijection_equivalent(const std::vector<PlacedPart> &a, const std::vector<PlacedPart> &b,
                          bool compare_color) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    const Cell base_a = a[0].anchor;
    const Cell base_b = b[perm[0]].anchor;
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      const PlacedPart &p = a[i];
      const PlacedPart &q = b[perm[i]];
      if (p.kind != q.kind || (compare_color && p.color != q.color)) ok = false;
      const Cell da = p.anchor - base_a;
      const Cell db = q.anchor - base_b;
      if (da.x != db.x || da.y != db.y || da.z != db.z) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

int nearest_source(int t, int source_size, int target_size) {
  // Target cell t covers the scaled interval [t*S, (t+1)*S) in units of 1/T;
  // its left edge falls inside exactly one source interval [s*T, (s+1)*T).
  for (int s = 0; s < source_size; ++s) {
    if (s * target_size <= t * source_size && t * source_size < (s + 1) * target_size) return s;
  }
  return -1;
}

PartialPlacementSpec random_spec(std::mt19937 &rng) {
  PartialPlacementSpec s;
  auto coin = [&] { return rng() % 2 == 0; };
  auto coord = [&] { return 1 + static_cast<int>(rng() % 16); };
  if (coin()) s.kind = random_kind(rng, true);
  if (coin()) s.color = random_color(rng);
  switch (rng() % 3) {
  case 0:
    if (coin()) s.x = coord();
    if (coin()) s.y = coord();
    if (coin()) s.z = coord();
    if (s.kind == PartKind::HorizontalBridge && s.x && *s.x < 16 && coin()) s.x2 = *s.x + 1;
    if (s.kind == PartKind::VerticalBridge && s.y && *s.y < 16 && coin()) s.y2 = *s.y + 1;
    break;
  case 1:
    s.relative = static_cast<RelativeLabel>(rng() % 9);
    if (coin()) s.z = coord();
    break;
  default: {
    DependentRelation rel;
    rel.kind = static_cast<RelationKind>(rng() % 6);
    if (coin()) {
      rel.target.type = AnchorRef::Type::Description;
      if (coin()) rel.target.kind = random_kind(rng, true);
      rel.target.color = random_color(rng);
      if (coin() && rel.target.kind) rel.target.color.reset();
    }
    s.relation = rel;
  }
  }
  return s;
}

} // namespace oracle
