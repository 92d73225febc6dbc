#include <gtest/gtest.h>

#include <random>

#include "blockwright/grid/grid_state.hpp"
#include "blockwright/grid/wire.hpp"
#include "oracles/oracles.hpp"

using namespace blockwright;

namespace {

GridState must(Result<GridState> r) {
  EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.error().to_string());
  return r.ok() ? std::move(r).value() : GridState{};
}

} // namespace

TEST(Footprint, SingleCellIsAnchor) {
  auto cells = footprint(PartKind::Nut, {4, 5, 1});
  ASSERT_TRUE(cells.ok());
  EXPECT_EQ(cells.value(), (std::vector<Cell>{{4, 5, 1}}));
}

TEST(Footprint, HorizontalBridgeSpansTwoColumns) {
  auto cells = footprint(PartKind::HorizontalBridge, {3, 2, 1});
  ASSERT_TRUE(cells.ok());
  EXPECT_EQ(cells.value(), (std::vector<Cell>{{3, 2, 1}, {4, 2, 1}}));
}

TEST(Footprint, VerticalBridgeOffTheEdge) {
  auto cells = footprint(PartKind::VerticalBridge, {1, 16, 1});
  ASSERT_FALSE(cells.ok());
  EXPECT_EQ(cells.error().code, Errc::OutOfBounds);
}

TEST(Footprint, MatchesHandWrittenTable) {
  for (PartKind k : kAllPartKinds) {
    for (int x = 1; x <= 15; x += 7) {
      auto cells = footprint(k, {x, x, 2});
      ASSERT_TRUE(cells.ok());
      EXPECT_EQ(cells.value(), oracle::cells_of(k, {x, x, 2}));
    }
  }
}

TEST(Supported, GroundAndAir) {
  GridState g;
  const std::vector<Cell> ground{{4, 5, 1}};
  const std::vector<Cell> air{{4, 5, 2}};
  EXPECT_TRUE(supported(g, PartKind::Nut, ground));
  EXPECT_FALSE(supported(g, PartKind::Nut, air));
}

TEST(Supported, BridgeNeedsOneCell) {
  GridState g = must(place(GridState{}, PartKind::Screw, Color::Blue, {3, 2, 1}));
  const std::vector<Cell> span{{3, 2, 2}, {4, 2, 2}};
  EXPECT_TRUE(supported(g, PartKind::HorizontalBridge, span));
  EXPECT_EQ(supported(g, PartKind::HorizontalBridge, span),
            oracle::supported_by({g.parts().begin()->second}, PartKind::HorizontalBridge, span));
}

TEST(Supported, AgreesWithScanOracle) {
  std::mt19937 rng(11);
  for (int round = 0; round < 200; ++round) {
    auto parts = oracle::random_structure(rng, 10, 5, true);
    GridState g;
    for (const auto &p : parts) g = must(place(g, p.kind, p.color, p.anchor));
    for (int probe = 0; probe < 20; ++probe) {
      const PartKind k = oracle::random_kind(rng, true);
      const Cell a{1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 5),
                   1 + static_cast<int>(rng() % 5)};
      const auto cells = oracle::cells_of(k, a);
      EXPECT_EQ(supported(g, k, cells), oracle::supported_by(parts, k, cells));
    }
  }
}

TEST(Place, SampleDialogueStack) {
  GridState g = must(place(GridState{}, PartKind::Screw, Color::Blue, {5, 4, 1}));
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.occupant({5, 4, 1}), std::optional<PartId>(1));
  g = must(place(g, PartKind::Screw, Color::Red, {6, 4, 1}));
  g = must(place(g, PartKind::Screw, Color::Red, {6, 4, 2}));
  EXPECT_EQ(g.size(), 3u);
  EXPECT_TRUE(validate(g).ok());
  EXPECT_EQ(g.part(3)->anchor, (Cell{6, 4, 2}));
}

TEST(Place, FloatingRejected) {
  auto r = place(GridState{}, PartKind::Washer, Color::Green, {2, 2, 3});
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, Errc::Unsupported);
}

TEST(Place, OccupiedNamesCell) {
  GridState g = must(place(GridState{}, PartKind::Nut, Color::Red, {4, 2, 1}));
  auto r = place(g, PartKind::HorizontalBridge, Color::Blue, {3, 2, 1});
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, Errc::Occupied);
  EXPECT_NE(r.error().message.find("(4,2,1)"), std::string::npos);
}

TEST(Place, InputNotMutated) {
  GridState g = must(place(GridState{}, PartKind::Nut, Color::Red, {4, 2, 1}));
  const auto before = wire::snapshot_string(g);
  (void)place(g, PartKind::Nut, Color::Red, {5, 2, 1});
  EXPECT_EQ(wire::snapshot_string(g), before);
}

TEST(Remove, WouldFloat) {
  GridState g = must(place(GridState{}, PartKind::Screw, Color::Red, {6, 4, 1}));
  g = must(place(g, PartKind::Screw, Color::Red, {6, 4, 2}));
  auto r = remove(g, {6, 4, 1});
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, Errc::WouldFloat);
  EXPECT_EQ(r.error().detail, 2);
}

TEST(Remove, InverseOfPlace) {
  GridState g = must(place(GridState{}, PartKind::Nut, Color::Red, {4, 5, 1}));
  g = must(remove(g, {4, 5, 1}));
  EXPECT_TRUE(g.same_contents(GridState{}));
}

TEST(Remove, BridgeFreesBothCells) {
  GridState g = must(place(GridState{}, PartKind::HorizontalBridge, Color::Red, {3, 2, 1}));
  g = must(remove(g, {4, 2, 1}));
  EXPECT_FALSE(g.occupied({3, 2, 1}));
  EXPECT_FALSE(g.occupied({4, 2, 1}));
  EXPECT_TRUE(g.empty());
}

TEST(Remove, EmptyCell) {
  auto r = remove(GridState{}, {1, 1, 1});
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, Errc::Empty);
}

TEST(Remove, BridgeKeepsOtherSupport) {
  GridState g = must(place(GridState{}, PartKind::Nut, Color::Red, {3, 2, 1}));
  g = must(place(g, PartKind::Nut, Color::Red, {4, 2, 1}));
  g = must(place(g, PartKind::HorizontalBridge, Color::Blue, {3, 2, 2}));
  g = must(remove(g, {3, 2, 1}));
  EXPECT_TRUE(validate(g).ok());
  EXPECT_EQ(remove(g, {4, 2, 1}).error().code, Errc::WouldFloat);
}

TEST(Ids, NeverReused) {
  GridState g = must(place(GridState{}, PartKind::Nut, Color::Red, {1, 1, 1}));
  g = must(remove(g, {1, 1, 1}));
  g = must(place(g, PartKind::Nut, Color::Red, {1, 1, 1}));
  EXPECT_EQ(g.parts().begin()->first, 2u);
}

TEST(DropHeight, CoversBridgeColumns) {
  GridState g = must(place(GridState{}, PartKind::Nut, Color::Red, {4, 2, 1}));
  g = must(place(g, PartKind::Nut, Color::Red, {4, 2, 2}));
  EXPECT_EQ(drop_height(g, PartKind::HorizontalBridge, 3, 2).value(), 3);
  EXPECT_EQ(drop_height(g, PartKind::Nut, 3, 2).value(), 1);
}

TEST(Properties, PlaceCommutesOnDisjointParts) {
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    const Cell a{1 + static_cast<int>(rng() % 8), 1 + static_cast<int>(rng() % 16), 1};
    const Cell b{9 + static_cast<int>(rng() % 7), 1 + static_cast<int>(rng() % 16), 1};
    const PartKind ka = oracle::random_kind(rng, true);
    const PartKind kb = oracle::random_kind(rng, false);
    auto ab = place(GridState{}, ka, Color::Red, a);
    if (!ab.ok()) continue;
    ab = place(ab.value(), kb, Color::Blue, b);
    auto ba = place(GridState{}, kb, Color::Blue, b);
    ba = place(ba.value(), ka, Color::Red, a);
    ASSERT_TRUE(ab.ok() && ba.ok());
    // Ids follow order, so compare the occupied cells with attributes.
    for (int y = 1; y <= 16; ++y) {
      for (int x = 1; x <= 16; ++x) {
        const Cell c{x, y, 1};
        ASSERT_EQ(ab.value().occupied(c), ba.value().occupied(c));
        if (ab.value().occupied(c)) {
          const auto *pa = ab.value().part(*ab.value().occupant(c));
          const auto *pb = ba.value().part(*ba.value().occupant(c));
          EXPECT_EQ(pa->kind, pb->kind);
          EXPECT_EQ(pa->anchor, pb->anchor);
        }
      }
    }
  }
}

TEST(Properties, PlaceThenRemoveIsIdentity) {
  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i) {
    auto parts = oracle::random_structure(rng, 8, 6, true);
    GridState g;
    for (const auto &p : parts) g = must(place(g, p.kind, p.color, p.anchor));
    const PartKind k = oracle::random_kind(rng, true);
    const int x = 1 + static_cast<int>(rng() % 6), y = 1 + static_cast<int>(rng() % 6);
    auto z = drop_height(g, k, x, y);
    if (!z.ok()) continue;
    auto placed = place(g, k, Color::White, {x, y, z.value()});
    if (!placed.ok()) continue;
    auto removed = remove(placed.value(), {x, y, z.value()});
    ASSERT_TRUE(removed.ok());
    EXPECT_TRUE(removed.value().same_contents(g));
  }
}

TEST(Wire, PlaceActionExactBytes) {
  const Action a = PlaceAction{PartKind::Screw, Color::Blue, {5, 4, 1}};
  EXPECT_EQ(wire::action_to_json(a).dump(),
            R"({"action":"place","part":"screw","color":"blue","x":5,"y":4,"z":1})");
  const Action b = PlaceAction{PartKind::HorizontalBridge, Color::Red, {3, 2, 1}};
  EXPECT_EQ(wire::action_to_json(b).dump(),
            R"({"action":"place","part":"horizontal-bridge","color":"red","x":3,"y":2,"z":1,"x2":4})");
  const Action c = RemoveAction{{1, 2, 3}};
  EXPECT_EQ(wire::action_to_json(c).dump(), R"({"action":"remove","x":1,"y":2,"z":3})");
}

TEST(Wire, ActionRoundTrip) {
  for (PartKind k : kAllPartKinds) {
    const Action a = PlaceAction{k, Color::Magenta, {2, 3, 4}};
    auto back = wire::action_from_json(nlohmann::json::parse(wire::action_to_json(a).dump()));
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(back.value(), a);
  }
}

TEST(Wire, RejectsBadBridgeSecondIndex) {
  auto j = nlohmann::json::parse(
      R"({"action":"place","part":"vertical-bridge","color":"red","x":3,"y":2,"z":1,"y2":5})");
  EXPECT_FALSE(wire::action_from_json(j).ok());
}

TEST(Wire, SnapshotInIdOrder) {
  GridState g = must(place(GridState{}, PartKind::Nut, Color::Red, {2, 2, 1}));
  g = must(place(g, PartKind::VerticalBridge, Color::Blue, {3, 3, 1}));
  const auto snap = wire::snapshot(g);
  ASSERT_EQ(snap.size(), 2u);
  EXPECT_EQ(snap[0]["id"], 1);
  EXPECT_EQ(snap[1]["cells"].dump(), "[[3,3,1],[3,4,1]]");
}
