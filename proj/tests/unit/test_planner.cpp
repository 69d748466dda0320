#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <queue>
#include <tuple>

#include "aspt/planner.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace aspt {
namespace {

PlannerConfig config_with(double roi, double roi_crit) {
  PlannerConfig c;
  c.risk.roi = roi;
  c.risk.roi_crit = roi_crit;
  return c;
}

DynamicObstacle scripted(const std::string& id, const GridMap& map, const std::vector<GridIndex>& cells) {
  DynamicObstacle o;
  o.id = id;
  for (GridIndex c : cells) o.shared_path.push_back(grid_to_world(map, c));
  o.position = o.shared_path.front();
  return o;
}

std::vector<GridIndex> cells_of(const TimedPath& p) {
  std::vector<GridIndex> out;
  for (const auto& s : p.steps) out.push_back(s.cell);
  return out;
}

TEST(Heuristic, Examples) {
  const PlannerConfig c;
  EXPECT_DOUBLE_EQ(heuristic({0, 0}, {3, 4}, CellState::Free, c), 5.0);
  EXPECT_DOUBLE_EQ(heuristic({0, 0}, {3, 4}, CellState::Unknown, c), 250.0);
  EXPECT_DOUBLE_EQ(heuristic({2, 7}, {2, 7}, CellState::Free, c), 0.0);
}

TEST(EdgeCost, FreeOrthogonalStepIsStepLength) {
  const GridMap m = GridMap::filled(3, 3, CellState::Free);
  PlannerConfig c;
  c.time_cost_weight = 0.0;
  const StaticRiskField f = build_static_field(m, c.risk);
  SearchNode from;
  from.v = {0, 0};
  EXPECT_DOUBLE_EQ(edge_cost(from, {1, 0}, 1.0, m, f, {}, c), 1.0);
}

TEST(EdgeCost, OccupiedIsInfinite) {
  const GridMap m = load_ascii(".#.");
  const PlannerConfig c;
  const StaticRiskField f = build_static_field(m, c.risk);
  SearchNode from;
  from.v = {0, 0};
  EXPECT_TRUE(std::isinf(edge_cost(from, {1, 0}, 1.0, m, f, {}, c)));
}

TEST(EdgeCost, AdjacentToWallAddsProximityRisk) {
  const GridMap m = load_ascii("#..");
  PlannerConfig c = config_with(98.0, 0.0);
  c.time_cost_weight = 0.0;
  const StaticRiskField f = build_static_field(m, c.risk);
  SearchNode from;
  from.v = {2, 0};
  EXPECT_NEAR(edge_cost(from, {1, 0}, 1.0, m, f, {}, c), 100.0, 1e-9);
}

TEST(EdgeCost, TimeTermUsesArrivalStep) {
  const GridMap m = GridMap::filled(3, 1, CellState::Free);
  PlannerConfig c;
  c.time_cost_weight = 2.0;
  const StaticRiskField f = build_static_field(m, c.risk);
  SearchNode from;
  from.v = {0, 0};
  from.n = 4;
  EXPECT_DOUBLE_EQ(edge_cost(from, {1, 0}, 1.0, m, f, {}, c), 1.0 + 2.0 * 5.0);
}

TEST(EdgeCost, RiskWeightsScaleFiniteRiskOnly) {
  const GridMap m = load_ascii("#..");
  PlannerConfig c = config_with(98.0, 0.0);
  c.time_cost_weight = 0.0;
  c.static_risk_weight = 0.0;
  const StaticRiskField f = build_static_field(m, c.risk);
  SearchNode from;
  from.v = {2, 0};
  EXPECT_DOUBLE_EQ(edge_cost(from, {1, 0}, 1.0, m, f, {}, c), 1.0);
  from.v = {1, 0};
  EXPECT_TRUE(std::isinf(edge_cost(from, {0, 0}, 1.0, m, f, {}, c)));
}

TEST(Plan, StraightCorridor) {
  const GridMap m = GridMap::filled(5, 1, CellState::Free);
  const PlannerConfig c;
  const StaticRiskField f = build_static_field(m, c.risk);
  const TimedPath p = plan({0, 0}, {4, 0}, m, f, {}, c);
  ASSERT_EQ(p.size(), 5u);
  for (int k = 0; k < 5; ++k) {
    EXPECT_EQ(p.steps[static_cast<std::size_t>(k)].cell, (GridIndex{k, 0}));
    EXPECT_EQ(p.steps[static_cast<std::size_t>(k)].t, k);
  }
  EXPECT_DOUBLE_EQ(p.total_length, 4.0);
}

// A plus-shaped junction: the agent runs along row 2 while an obstacle walks
// down column 2, reaching the crossing at t = 2 and resting at (2,4) from t = 4.
// With a 0.5 m obstacle and a 1-cell critical band, the agent's centre must stay
// at least 1.5 cells from the obstacle's, so (1,2) is closed for t = 1..3 and the
// only plan is to hold at (0,2) until t = 3.
TEST(Plan, WaitsForCrossingObstacle) {
  const GridMap m = load_ascii("##.##\n##.##\n.....\n##.##\n##.##");
  const PlannerConfig c = config_with(10.0, 1.0);
  const StaticRiskField f = build_static_field(m, c.risk);
  const ObstacleSet obs{scripted("walker", m, {{2, 0}, {2, 1}, {2, 2}, {2, 3}, {2, 4}})};
  const TimedPath p = plan({0, 2}, {4, 2}, m, f, obs, c);
  const std::vector<GridIndex> expected{{0, 2}, {0, 2}, {0, 2}, {0, 2}, {1, 2}, {2, 2}, {3, 2}, {4, 2}};
  EXPECT_EQ(cells_of(p), expected);
  EXPECT_EQ(p.wait_count(), 3u);
  EXPECT_TRUE(p.is_well_formed(Connectivity::Eight));
  for (const auto& s : p.steps) {
    const int k = std::min(s.t, 4);
    EXPECT_NE(s.cell, (GridIndex{2, k})) << "t=" << s.t;
  }
}

TEST(Plan, WalledOffGoalIsNoPath) {
  const GridMap m = load_ascii("..#..\n..#..\n..#..");
  const PlannerConfig c = config_with(3.0, 0.0);
  const StaticRiskField f = build_static_field(m, c.risk);
  EXPECT_THROW(plan({0, 0}, {4, 0}, m, f, {}, c), NoPathError);
}

TEST(Plan, ZeroExpansionBudgetTimesOut) {
  const GridMap m = GridMap::filled(4, 4, CellState::Free);
  PlannerConfig c;
  c.watchdog_max_expansions = 0;
  const StaticRiskField f = build_static_field(m, c.risk);
  EXPECT_THROW(plan({0, 0}, {3, 3}, m, f, {}, c), WatchdogTimeout);
}

TEST(Plan, InvalidEndpoints) {
  const GridMap m = load_ascii("..#");
  const PlannerConfig c = config_with(3.0, 0.0);
  const StaticRiskField f = build_static_field(m, c.risk);
  EXPECT_THROW(plan({2, 0}, {0, 0}, m, f, {}, c), InvalidEndpoint);
  EXPECT_THROW(plan({0, 0}, {2, 0}, m, f, {}, c), InvalidEndpoint);
  EXPECT_THROW(plan({0, 0}, {5, 0}, m, f, {}, c), InvalidEndpoint);
  try {
    plan({0, 0}, {0, 7}, m, f, {}, c);
  } catch (const PlanningError& e) {
    EXPECT_EQ(e.kind(), PlanFailure::InvalidEndpoint);
  }
}

TEST(Plan, GoalPermanentlyInsideCriticalBandFailsFast) {
  const GridMap m = GridMap::filled(6, 6, CellState::Free);
  const PlannerConfig c = config_with(3.0, 1.0);
  const StaticRiskField f = build_static_field(m, c.risk);
  const ObstacleSet obs{scripted("sitter", m, {{0, 5}, {1, 5}, {2, 5}, {3, 5}, {4, 4}})};
  PlanStats stats;
  EXPECT_THROW(plan({0, 0}, {5, 5}, m, f, obs, c, &stats), NoPathError);
  EXPECT_EQ(stats.expansions, 0u);
}

TEST(Plan, UnknownCellsAreAvoidedWhenCheap) {
  // a row of Unknown cells on the straight line; the detour is short
  const GridMap m = load_ascii(".......\n.......\n.??????\n.......");
  PlannerConfig c = config_with(2.0, 0.0);
  c.time_cost_weight = 0.0;
  const StaticRiskField f = build_static_field(m, c.risk);
  const TimedPath p = plan({6, 3}, {6, 1}, m, f, {}, c);
  for (const auto& s : p.steps) EXPECT_NE(m.at(s.cell), CellState::Unknown);
}

TEST(ReplanFrom, UnchangedWorldReproducesTail) {
  const GridMap m = load_ascii("..........\n....##....\n....##....\n..........\n..........");
  const PlannerConfig c = config_with(3.0, 1.0);
  const StaticRiskField f = build_static_field(m, c.risk);
  const TimedPath first = plan({0, 2}, {9, 2}, m, f, {}, c);
  for (int k = 1; k < first.end_time(); ++k) {
    const TimedPath again = replan_from(first.cell_at(k), k, first, {9, 2}, m, f, {}, c);
    EXPECT_EQ(again, first.tail_from(k)) << "replanned at t=" << k;
  }
}

TEST(ReplanFrom, NewObstacleChangesRoute) {
  const GridMap m = GridMap::filled(9, 7, CellState::Free).with_cell({4, 3}, CellState::Occupied);
  const PlannerConfig c = config_with(2.0, 1.0);
  const StaticRiskField f = build_static_field(m, c.risk);
  const TimedPath first = plan({0, 3}, {8, 3}, m, f, {}, c);
  const int k = 2;
  const GridIndex here = first.cell_at(k);
  // park an obstacle on the old route a few cells ahead
  const GridIndex ahead = first.cell_at(k + 3);
  const ObstacleSet obs{scripted("crate", m, {ahead})};
  const TimedPath again = replan_from(here, k, first, {8, 3}, m, f, obs, c);
  EXPECT_NE(again, first.tail_from(k));
  EXPECT_EQ(again.front().t, k);
  EXPECT_EQ(again.back().cell, (GridIndex{8, 3}));
  for (const auto& s : again.steps) EXPECT_GE(cell_distance(s.cell, ahead), 1.5);
}

TEST(ReplanFrom, AtGoalIsSingleElement) {
  const GridMap m = GridMap::filled(3, 3, CellState::Free);
  const PlannerConfig c;
  const StaticRiskField f = build_static_field(m, c.risk);
  const TimedPath p = replan_from({2, 2}, 7, TimedPath{}, {2, 2}, m, f, {}, c);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.front(), (TimedCell{{2, 2}, 7}));
}

// --- properties ---------------------------------------------------------------

struct RandomProblem {
  GridMap map;
  GridIndex start;
  GridIndex goal;
  ObstacleSet obstacles;
};

RandomProblem random_problem(gen::Rng& rng, int size, int obstacles) {
  RandomProblem p;
  for (;;) {
    p.map = gen::random_map(rng, size, size, 0.18, 0.04);
    const auto cells = gen::distinct_free_cells(rng, p.map, 2 + static_cast<std::size_t>(obstacles));
    if (cells.size() < 2 + static_cast<std::size_t>(obstacles)) continue;
    if (!oracle::dijkstra_geodesic(p.map, cells[0], cells[1], Connectivity::Eight)) continue;
    p.start = cells[0];
    p.goal = cells[1];
    p.obstacles.clear();
    for (int k = 0; k < obstacles; ++k) {
      DynamicObstacle o;
      o.id = "o" + std::to_string(k);
      const GridIndex at = cells[static_cast<std::size_t>(2 + k)];
      if (gen::chance(rng, 0.5)) {
        const TimedPath walk = gen::random_walk(rng, p.map, at, gen::uniform_int(rng, 3, 20));
        for (const auto& s : walk.steps) o.shared_path.push_back(grid_to_world(p.map, s.cell));
        o.position = o.shared_path.front();
      } else {
        o.position = grid_to_world(p.map, at);
        o.velocity = {gen::uniform_real(rng, -0.5, 0.5), gen::uniform_real(rng, -0.5, 0.5)};
      }
      o.major = o.minor = gen::uniform_real(rng, 0.2, 0.5);
      if (gen::chance(rng, 0.3)) o.minor *= 0.6;
      o.theta = gen::uniform_real(rng, -1.5, 1.5);
      p.obstacles.push_back(o);
    }
    return p;
  }
}

TEST(PlannerProperty, ReturnedPathsAreSafeAndWellFormed) {
  gen::Rng rng(41);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const RandomProblem pr = random_problem(rng, 14, 2);
    PlannerConfig c = config_with(4.0, gen::uniform_real(rng, 0.0, 1.0));
    c.watchdog_max_expansions = 60000;
    const StaticRiskField f = build_static_field(pr.map, c.risk);
    TimedPath p;
    try {
      p = plan(pr.start, pr.goal, pr.map, f, pr.obstacles, c);
    } catch (const PlanningError&) {
      continue;
    }
    ++solved;
    const RiskModel model(pr.map, f, pr.obstacles, c);
    ASSERT_TRUE(p.is_well_formed(c.connectivity));
    ASSERT_EQ(p.front().cell, pr.start);
    ASSERT_EQ(p.back().cell, pr.goal);
    ASSERT_EQ(p.front().t, 0);
    for (std::size_t k = 1; k < p.size(); ++k) {
      const auto& s = p.steps[k];
      ASSERT_FALSE(pr.map.is_occupied(s.cell));
      ASSERT_TRUE(std::isfinite(model.static_risk(s.cell)));
      ASSERT_TRUE(std::isfinite(model.dynamic_risk_at(s.cell, s.t))) << "trial " << trial << " t=" << s.t;
    }
    // waits: repeated cells are consecutive timesteps and counted once each
    std::size_t repeats = 0;
    for (std::size_t k = 1; k < p.size(); ++k) {
      if (p.steps[k].cell == p.steps[k - 1].cell) {
        ++repeats;
        ASSERT_EQ(p.steps[k].t, p.steps[k - 1].t + 1);
      }
    }
    ASSERT_EQ(repeats, p.wait_count());
  }
  EXPECT_GT(solved, 30);
}

TEST(PlannerProperty, DegeneratesToShortestPath) {
  gen::Rng rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const RandomProblem pr = random_problem(rng, gen::uniform_int(rng, 4, 32), 0);
    PlannerConfig c;
    c.connectivity = gen::chance(rng, 0.5) ? Connectivity::Four : Connectivity::Eight;
    c.static_risk_weight = 0.0;
    c.dynamic_risk_weight = 0.0;
    c.time_cost_weight = 0.0;
    c.unknown_heuristic_factor = 1.0;
    const StaticRiskField f = build_static_field(pr.map, c.risk);
    const auto truth = oracle::dijkstra_geodesic(pr.map, pr.start, pr.goal, c.connectivity);
    if (!truth) {
      EXPECT_THROW(plan(pr.start, pr.goal, pr.map, f, {}, c), NoPathError);
      continue;
    }
    const TimedPath p = plan(pr.start, pr.goal, pr.map, f, {}, c);
    ASSERT_EQ(oracle::move_counts(p), *truth) << "trial " << trial;
    ASSERT_NEAR(p.total_cost, truth->length(), 1e-9);
  }
}

// Exhaustive Dijkstra over (cell, timestep) using the library's edge costs;
// only the search itself is under test here.
double exhaustive_cost(GridIndex start, GridIndex goal, const GridMap& m, const StaticRiskField& f,
                       const PlannerConfig& c) {
  const int max_n = static_cast<int>(m.cell_count());
  std::vector<double> best(m.cell_count() * static_cast<std::size_t>(max_n + 1), kInfiniteRisk);
  using Entry = std::tuple<double, int, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.push({0.0, 0, start.x, start.y});
  while (!open.empty()) {
    const auto [g, n, x, y] = open.top();
    open.pop();
    if (GridIndex{x, y} == goal) return g;
    if (n >= max_n) continue;
    SearchNode from;
    from.v = {x, y};
    from.n = n;
    for (const Neighbor& nb : neighbors(m, {x, y}, c.connectivity)) {
      const double cost = edge_cost(from, nb.cell, nb.step, m, f, {}, c);
      if (std::isinf(cost)) continue;
      double& b = best[m.index_of(nb.cell) * static_cast<std::size_t>(max_n + 1) + static_cast<std::size_t>(n + 1)];
      if (g + cost < b) {
        b = g + cost;
        open.push({b, n + 1, nb.cell.x, nb.cell.y});
      }
    }
  }
  return kInfiniteRisk;
}

TEST(PlannerProperty, TimeTermWithoutObstaclesStaysOptimal) {
  gen::Rng rng(44);
  for (int trial = 0; trial < 40; ++trial) {
    const RandomProblem pr = random_problem(rng, gen::uniform_int(rng, 3, 8), 0);
    PlannerConfig c = config_with(3.0, gen::uniform_real(rng, 0.0, 0.9));
    c.time_cost_weight = gen::uniform_real(rng, 0.1, 5.0);
    c.unknown_heuristic_factor = 1.0;
    const StaticRiskField f = build_static_field(pr.map, c.risk);
    const double truth = exhaustive_cost(pr.start, pr.goal, pr.map, f, c);
    if (std::isinf(truth)) {
      EXPECT_THROW(plan(pr.start, pr.goal, pr.map, f, {}, c), NoPathError);
      continue;
    }
    const TimedPath p = plan(pr.start, pr.goal, pr.map, f, {}, c);
    ASSERT_NEAR(p.total_cost, truth, 1e-9) << "trial " << trial;
  }
}

TEST(PlannerProperty, Deterministic) {
  gen::Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const RandomProblem pr = random_problem(rng, 12, 2);
    PlannerConfig c = config_with(4.0, 0.5);
    c.watchdog_max_expansions = 50000;
    c.watchdog_max_seconds = 1e9;
    const StaticRiskField f = build_static_field(pr.map, c.risk);
    std::optional<TimedPath> a;
    std::optional<TimedPath> b;
    try {
      a = plan(pr.start, pr.goal, pr.map, f, pr.obstacles, c);
    } catch (const PlanningError&) {
    }
    try {
      b = plan(pr.start, pr.goal, pr.map, f, pr.obstacles, c);
    } catch (const PlanningError&) {
    }
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      ASSERT_EQ(*a, *b);
      ASSERT_EQ(a->total_cost, b->total_cost);
    }
  }
}

TEST(PlannerProperty, ScalingRiskKeepsSymmetricTieBreakAndInfeasibility) {
  // two mirror-image routes around a central block
  const GridMap m = load_ascii(
      ".........\n"
      ".........\n"
      "...###...\n"
      "...###...\n"
      "...###...\n"
      ".........\n"
      ".........");
  PlannerConfig c = config_with(3.0, 1.0);
  c.time_cost_weight = 0.0;
  const StaticRiskField f = build_static_field(m, c.risk);
  const TimedPath base = plan({0, 3}, {8, 3}, m, f, {}, c);
  for (double k : {0.5, 2.0, 7.0}) {
    const StaticRiskField scaled = f.scaled(k);
    const TimedPath p = plan({0, 3}, {8, 3}, m, scaled, {}, c);
    EXPECT_EQ(p, base) << "k=" << k;
    for (const auto& s : p.steps) EXPECT_FALSE(m.is_occupied(s.cell));
  }
  // a route blocked by Occupied cells stays blocked at any scale
  const GridMap walled = load_ascii("..#..\n..#..");
  const StaticRiskField wf = build_static_field(walled, c.risk).scaled(1e-6);
  EXPECT_THROW(plan({0, 0}, {4, 0}, walled, wf, {}, c), NoPathError);
}

}  // namespace
}  // namespace aspt
