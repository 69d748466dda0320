#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "aspt/grid_map.hpp"
#include "generators.hpp"

namespace aspt {
namespace {

const std::string kMeta =
    "image: map.pgm\nresolution: 0.05\norigin: [1.0, -2.0, 0.0]\nnegate: 0\n"
    "occupied_thresh: 0.65\nfree_thresh: 0.196\n";

std::string p5(int w, int h, const std::string& pixels) {
  return "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n" + pixels;
}

TEST(LoadPgmYaml, ClassifiesPixelsByMapServerThresholds) {
  const std::string pixels{'\x00', '\xfe', '\xcd', '\x00'};  // 0, 254, 205, 0
  const GridMap m = load_pgm_yaml(p5(2, 2, pixels), kMeta);
  ASSERT_EQ(m.width(), 2);
  ASSERT_EQ(m.height(), 2);
  EXPECT_EQ(m.at({0, 0}), CellState::Occupied);
  EXPECT_EQ(m.at({1, 0}), CellState::Free);
  EXPECT_EQ(m.at({0, 1}), CellState::Unknown);  // p = 50/255 lies between the thresholds
  EXPECT_EQ(m.at({1, 1}), CellState::Occupied);
  EXPECT_DOUBLE_EQ(m.resolution(), 0.05);
  EXPECT_DOUBLE_EQ(m.origin().x, 1.0);
  EXPECT_DOUBLE_EQ(m.origin().y, -2.0);
}

TEST(LoadPgmYaml, EmptyPayloadIsPixelCountMismatch) {
  try {
    load_pgm_yaml(p5(2, 2, ""), kMeta);
    FAIL() << "expected MapLoadError";
  } catch (const MapLoadError& e) {
    EXPECT_NE(std::string(e.what()).find("pixel count mismatch"), std::string::npos) << e.what();
  }
}

TEST(LoadPgmYaml, SingleNearWhitePixelIsFree) {
  const GridMap m = load_pgm_yaml(p5(1, 1, std::string{'\xfe'}), kMeta);
  EXPECT_EQ(m.at({0, 0}), CellState::Free);
}

TEST(LoadPgmYaml, AsciiP2WithComments) {
  const GridMap m = load_pgm_yaml("P2\n# made by hand\n3 1\n255\n0 254 205\n", kMeta);
  EXPECT_EQ(m.at({0, 0}), CellState::Occupied);
  EXPECT_EQ(m.at({1, 0}), CellState::Free);
  EXPECT_EQ(m.at({2, 0}), CellState::Unknown);
}

TEST(LoadPgmYaml, NegateFlipsTheConvention) {
  std::string meta = kMeta;
  meta.replace(meta.find("negate: 0"), 9, "negate: 1");
  const GridMap m = load_pgm_yaml(p5(2, 1, std::string{'\x00', '\xfe'}), meta);
  EXPECT_EQ(m.at({0, 0}), CellState::Free);
  EXPECT_EQ(m.at({1, 0}), CellState::Occupied);
}

TEST(LoadPgmYaml, MissingMetadataKeyIsNamed) {
  try {
    load_pgm_yaml(p5(1, 1, std::string{'\x00'}), "image: a.pgm\norigin: [0, 0, 0]\n");
    FAIL() << "expected MapLoadError";
  } catch (const MapLoadError& e) {
    EXPECT_NE(std::string(e.what()).find("resolution"), std::string::npos) << e.what();
  }
}

TEST(LoadPgmYaml, MalformedHeader) {
  EXPECT_THROW(load_pgm_yaml("P7\n1 1\n255\n\x00", kMeta), MapLoadError);
  EXPECT_THROW(load_pgm_yaml("P5\nx 1\n255\n\x00", kMeta), MapLoadError);
  EXPECT_THROW(load_pgm_yaml("P5\n1", kMeta), MapLoadError);
}

TEST(LoadAscii, BasicMapping) {
  const GridMap m = load_ascii(".#\n..");
  ASSERT_EQ(m.width(), 2);
  ASSERT_EQ(m.height(), 2);
  EXPECT_EQ(m.at({1, 0}), CellState::Occupied);
  EXPECT_EQ(std::count(m.cells().begin(), m.cells().end(), CellState::Occupied), 1);
  EXPECT_DOUBLE_EQ(m.resolution(), 1.0);
  EXPECT_EQ(m.origin(), (WorldPoint{0.0, 0.0}));
}

TEST(LoadAscii, RaggedRowNamesLine) {
  try {
    load_ascii(".#\n...");
    FAIL() << "expected MapLoadError";
  } catch (const MapLoadError& e) {
    EXPECT_NE(std::string(e.what()).find("ragged row at line 2"), std::string::npos) << e.what();
  }
}

TEST(LoadAscii, UnknownCellAndUnknownCharacter) {
  const GridMap m = load_ascii("?");
  EXPECT_EQ(m.width(), 1);
  EXPECT_EQ(m.at({0, 0}), CellState::Unknown);
  EXPECT_THROW(load_ascii("..\n.x"), MapLoadError);
}

TEST(LoadAscii, ResolutionHeader) {
  const GridMap m = load_ascii("resolution 0.25\n..\n..\n");
  EXPECT_DOUBLE_EQ(m.resolution(), 0.25);
  EXPECT_EQ(m.height(), 2);
}

TEST(Neighbors, FourConnectedCenter) {
  const GridMap m = GridMap::filled(3, 3, CellState::Free);
  const auto nb = neighbors(m, {1, 1}, Connectivity::Four);
  ASSERT_EQ(nb.size(), 4u);
  for (const auto& n : nb) EXPECT_DOUBLE_EQ(n.step, 1.0);
}

TEST(Neighbors, EightConnectedCorner) {
  const GridMap m = GridMap::filled(3, 3, CellState::Free);
  auto nb = neighbors(m, {0, 0}, Connectivity::Eight);
  ASSERT_EQ(nb.size(), 3u);
  std::vector<double> steps;
  for (const auto& n : nb) steps.push_back(n.step);
  std::sort(steps.begin(), steps.end());
  EXPECT_DOUBLE_EQ(steps[0], 1.0);
  EXPECT_DOUBLE_EQ(steps[1], 1.0);
  EXPECT_DOUBLE_EQ(steps[2], std::sqrt(2.0));
}

TEST(Neighbors, CornerCuttingIsBlocked) {
  const GridMap m = load_ascii(".#.\n#..\n...");
  // (1,0) and (0,1) are Occupied; the diagonal to (1,1) passes between them.
  std::vector<GridIndex> free_moves;
  for (const auto& n : neighbors(m, {0, 0}, Connectivity::Eight)) {
    if (!m.is_occupied(n.cell)) free_moves.push_back(n.cell);
  }
  EXPECT_TRUE(free_moves.empty());
}

TEST(Neighbors, OutOfBoundsIsAContractViolation) {
  const GridMap m = GridMap::filled(2, 2, CellState::Free);
  EXPECT_THROW(neighbors(m, {2, 0}), std::out_of_range);
  EXPECT_THROW(neighbors(m, {0, -1}), std::out_of_range);
}

TEST(WorldGrid, ConversionExamples) {
  const GridMap m = GridMap::filled(4, 4, CellState::Free, 0.5);
  EXPECT_EQ(world_to_grid(m, {1.25, 0.25}), (GridIndex{2, 0}));
  const WorldPoint c = grid_to_world(m, {2, 0});
  EXPECT_DOUBLE_EQ(c.x, 1.25);
  EXPECT_DOUBLE_EQ(c.y, 0.25);
  try {
    world_to_grid(m, {-0.1, 0.0});
    FAIL() << "expected OutOfExtentError";
  } catch (const OutOfExtentError& e) {
    EXPECT_DOUBLE_EQ(e.point().x, -0.1);
    EXPECT_NE(std::string(e.what()).find("-0.1"), std::string::npos) << e.what();
  }
}

TEST(Inflate, MarksCellsWithinRadius) {
  const GridMap m = load_ascii(".....\n.....\n..#..\n.....\n.....");
  const GridMap one = inflate(m, 1.0);
  EXPECT_TRUE(one.is_occupied({2, 1}));
  EXPECT_FALSE(one.is_occupied({1, 1}));  // sqrt(2) > 1
  const GridMap diag = inflate(m, 1.5);
  EXPECT_TRUE(diag.is_occupied({1, 1}));
  EXPECT_FALSE(diag.is_occupied({0, 2}));
  EXPECT_EQ(inflate(m, 0.0).cells(), m.cells());
}

// --- properties ---------------------------------------------------------------

TEST(GridWorldProperty, WorldGridRoundTrip) {
  gen::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = gen::uniform_int(rng, 1, 30);
    const int h = gen::uniform_int(rng, 1, 30);
    const double res = gen::uniform_real(rng, 0.01, 3.0);
    const WorldPoint origin{gen::uniform_real(rng, -50, 50), gen::uniform_real(rng, -50, 50)};
    const GridMap m = GridMap::filled(w, h, CellState::Free, res, origin);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        ASSERT_EQ(world_to_grid(m, grid_to_world(m, {x, y})), (GridIndex{x, y})) << "trial " << trial;
      }
    }
  }
}

TEST(GridWorldProperty, NeighborsInBoundsAndFourSubsetOfEight) {
  gen::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const GridMap m = gen::random_map(rng, gen::uniform_int(rng, 1, 12), gen::uniform_int(rng, 1, 12), 0.3, 0.1);
    for (int y = 0; y < m.height(); ++y) {
      for (int x = 0; x < m.width(); ++x) {
        const auto four = neighbors(m, {x, y}, Connectivity::Four);
        const auto eight = neighbors(m, {x, y}, Connectivity::Eight);
        for (const auto& n : eight) {
          ASSERT_TRUE(m.in_bounds(n.cell));
          const bool diagonal = n.cell.x != x && n.cell.y != y;
          ASSERT_DOUBLE_EQ(n.step, diagonal ? std::sqrt(2.0) : 1.0);
        }
        for (const auto& n : four) {
          ASSERT_TRUE(std::any_of(eight.begin(), eight.end(), [&](const Neighbor& e) { return e.cell == n.cell; }));
        }
      }
    }
  }
}

TEST(GridWorldProperty, AsciiSerializerRoundTrip) {
  gen::Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const double res = gen::chance(rng, 0.5) ? 1.0 : 0.25 * gen::uniform_int(rng, 1, 8);
    const GridMap m =
        gen::random_map(rng, gen::uniform_int(rng, 1, 20), gen::uniform_int(rng, 1, 20), 0.3, 0.2, res);
    const std::string text = to_ascii(m);
    const GridMap back = load_ascii(text);
    ASSERT_EQ(back.cells(), m.cells());
    ASSERT_EQ(back.width(), m.width());
    ASSERT_DOUBLE_EQ(back.resolution(), m.resolution());
    ASSERT_EQ(to_ascii(back), text);
  }
}

}  // namespace
}  // namespace aspt
