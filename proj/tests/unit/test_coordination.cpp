#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <thread>

#include "aspt/coordination/blackboard.hpp"
#include "aspt/coordination/simulation.hpp"
#include "aspt/coordination/validator.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace aspt::coordination {
namespace {

TimedPath path_of(std::initializer_list<GridIndex> cells, int t0 = 0) {
  TimedPath p;
  int t = t0;
  for (GridIndex c : cells) p.steps.push_back({c, t++});
  return p;
}

std::size_t count_kind(const std::vector<Conflict>& cs, ConflictKind kind) {
  return static_cast<std::size_t>(std::count_if(cs.begin(), cs.end(), [&](const Conflict& c) { return c.kind == kind; }));
}

SimulationConfig sim_config(double roi, double roi_crit) {
  SimulationConfig c;
  c.planner.risk.roi = roi;
  c.planner.risk.roi_crit = roi_crit;
  return c;
}

TEST(Blackboard, PublishReplacesAndSnapshotsAreStable) {
  PathBlackboard board;
  EXPECT_EQ(board.size(), 0u);
  board.publish("a", path_of({{0, 0}, {1, 0}}), 0);
  const auto before = board.snapshot();
  board.publish("a", path_of({{1, 0}, {2, 0}}, 1), 1);
  board.publish("b", path_of({{5, 5}}), 1);
  EXPECT_EQ(board.size(), 2u);
  EXPECT_EQ(before.size(), 1u);
  EXPECT_EQ(before.at("a")->path.front().cell, (GridIndex{0, 0}));
  const auto after = board.snapshot();
  EXPECT_EQ(after.at("a")->path.front().cell, (GridIndex{1, 0}));
  EXPECT_EQ(after.at("a")->published_at, 1);
}

TEST(Blackboard, ConcurrentPublishersNeverTearAnEntry) {
  PathBlackboard board;
  std::atomic<bool> stop{false};
  std::atomic<int> torn{0};
  std::thread reader([&] {
    while (!stop) {
      for (const auto& [id, entry] : board.snapshot()) {
        // every publication is a path whose length equals its publication time + 1
        if (static_cast<int>(entry->path.size()) != entry->published_at + 1) ++torn;
      }
    }
  });
  std::vector<std::thread> writers;
  for (int w = 0; w < 4; ++w) {
    writers.emplace_back([&board, w] {
      for (int k = 0; k < 300; ++k) {
        TimedPath p;
        for (int t = 0; t <= k; ++t) p.steps.push_back({{w, t}, t});
        board.publish("w" + std::to_string(w), std::move(p), k);
      }
    });
  }
  for (auto& t : writers) t.join();
  stop = true;
  reader.join();
  EXPECT_EQ(torn.load(), 0);
  const auto snap = board.snapshot();
  ASSERT_EQ(snap.size(), 4u);
  for (const auto& [id, entry] : snap) EXPECT_EQ(entry->published_at, 299);
}

TEST(PathsToObstacles, AlignedToCurrentTimeAndRestingAtEnd) {
  const GridMap m = GridMap::filled(6, 1, CellState::Free, 0.5);
  PathBlackboard board;
  board.publish("a", path_of({{0, 0}, {1, 0}, {2, 0}, {3, 0}}), 0);
  board.publish("me", path_of({{5, 0}}), 0);
  const ObstacleSet obs = paths_to_obstacles(board.snapshot(), "me", {}, 2, m);
  ASSERT_EQ(obs.size(), 1u);
  const DynamicObstacle& o = obs.front();
  EXPECT_EQ(o.id, "a");
  EXPECT_DOUBLE_EQ(o.major, 0.25);
  EXPECT_DOUBLE_EQ(o.position.x, grid_to_world(m, {2, 0}).x);
  ASSERT_EQ(o.shared_path.size(), 2u);
  const PredictedPose later = predict_pose(o, 10, 1.0);
  EXPECT_DOUBLE_EQ(later.x, grid_to_world(m, {3, 0}).x);

  // past the end of its path the agent stands still
  const ObstacleSet done = paths_to_obstacles(board.snapshot(), "me", {}, 9, m);
  ASSERT_EQ(done.size(), 1u);
  EXPECT_DOUBLE_EQ(done.front().position.x, grid_to_world(m, {3, 0}).x);
  EXPECT_DOUBLE_EQ(done.front().speed(), 0.0);
}

TEST(PathsToObstacles, ExplicitFootprint) {
  const GridMap m = GridMap::filled(3, 3, CellState::Free);
  PathBlackboard board;
  board.publish("a", path_of({{1, 1}}), 0);
  const ObstacleSet obs = paths_to_obstacles(board.snapshot(), "", {{"a", Footprint{0.8, 0.3, 1.0}}}, 0, m);
  ASSERT_EQ(obs.size(), 1u);
  EXPECT_DOUBLE_EQ(obs[0].major, 0.8);
  EXPECT_DOUBLE_EQ(obs[0].minor, 0.3);
  EXPECT_DOUBLE_EQ(obs[0].theta, 1.0);
}

TEST(AdvanceObstacle, TrimsScriptAndExtrapolatesVelocity) {
  const GridMap m = GridMap::filled(5, 1, CellState::Free);
  DynamicObstacle scripted;
  for (int x = 0; x < 5; ++x) scripted.shared_path.push_back(grid_to_world(m, {x, 0}));
  scripted.position = scripted.shared_path.front();
  const DynamicObstacle a = advance_obstacle(scripted, 3);
  EXPECT_EQ(a.shared_path.size(), 2u);
  EXPECT_DOUBLE_EQ(a.position.x, 3.5);
  const DynamicObstacle past = advance_obstacle(scripted, 40);
  EXPECT_EQ(past.shared_path.size(), 1u);
  EXPECT_DOUBLE_EQ(past.position.x, 4.5);

  DynamicObstacle moving;
  moving.velocity = {0.5, -1.0};
  const DynamicObstacle b = advance_obstacle(moving, 4, 0.5);
  EXPECT_DOUBLE_EQ(b.position.x, 1.0);
  EXPECT_DOUBLE_EQ(b.position.y, -2.0);
}

TEST(Validate, EmptyAndSingleAgentAreClean) {
  EXPECT_TRUE(validate({}).empty());
  EXPECT_TRUE(validate({{{0, 0}, {1, 0}, {2, 0}}}).empty());
}

TEST(Validate, VertexConflict) {
  const auto cs = validate({{{0, 0}, {1, 0}}, {{2, 0}, {1, 0}}, {{1, 1}, {1, 0}}});
  ASSERT_EQ(count_kind(cs, ConflictKind::Vertex), 1u);
  EXPECT_EQ(cs.front(), (Conflict{ConflictKind::Vertex, {0, 1, 2}, {{1, 0}}, 1}));
  EXPECT_EQ(count_collisions(cs), 1u);
}

TEST(Validate, SwapEmitsEdgeAndSwap) {
  const auto cs = validate({{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}});
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0], (Conflict{ConflictKind::Edge, {0, 1}, {{0, 0}, {1, 0}}, 0}));
  EXPECT_EQ(cs[1], (Conflict{ConflictKind::Swap, {0, 1}, {{0, 0}, {1, 0}}, 0}));
  EXPECT_EQ(count_collisions(cs), 2u);
}

TEST(Validate, FollowChainReportedOnce) {
  // b trails a by one cell for three ticks
  const Trajectory a{{1, 0}, {2, 0}, {3, 0}, {4, 0}};
  const Trajectory b{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  const auto cs = validate({a, b});
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0], (Conflict{ConflictKind::Follow, {0, 1}, {{1, 0}}, 0}));
  EXPECT_EQ(count_collisions(cs), 0u);
  // a single tick of following is not a chain
  EXPECT_TRUE(validate({{{1, 0}, {2, 0}}, {{0, 0}, {1, 0}}}).empty());
}

TEST(Validate, ThreeCycle) {
  // three agents rotate around an L of cells
  const Trajectory a{{0, 0}, {1, 0}};
  const Trajectory b{{1, 0}, {1, 1}};
  const Trajectory c{{1, 1}, {0, 0}};
  const auto cs = validate({a, b, c});
  ASSERT_EQ(count_kind(cs, ConflictKind::Cyclic), 1u);
  const Conflict& cyc = *std::find_if(cs.begin(), cs.end(), [](const Conflict& x) { return x.kind == ConflictKind::Cyclic; });
  EXPECT_EQ(cyc.agents.size(), 3u);
  EXPECT_EQ(cyc.cells.size(), 3u);
  EXPECT_EQ(cyc.time, 0);
  EXPECT_EQ(count_collisions(cs), 0u);
}

TEST(ValidateSetup, Rejections) {
  const GridMap m = load_ascii("...#");
  const SimulationConfig c;
  EXPECT_THROW(validate_setup(m, {{"a", {3, 0}, {0, 0}, {}}}, c), std::invalid_argument);
  EXPECT_THROW(validate_setup(m, {{"a", {0, 0}, {1, 0}, {}}, {"a", {2, 0}, {1, 0}, {}}}, c), std::invalid_argument);
  EXPECT_THROW(validate_setup(m, {{"a", {0, 0}, {1, 0}, {}}, {"b", {0, 0}, {2, 0}, {}}}, c), std::invalid_argument);
  SimulationConfig bad = c;
  bad.replan_interval = 0;
  EXPECT_THROW(validate_setup(m, {{"a", {0, 0}, {1, 0}, {}}}, bad), std::invalid_argument);
}

TEST(Simulation, SingleAgentFollowsGeodesic) {
  const GridMap m = load_ascii("......\n.####.\n......");
  const SimulationConfig c = sim_config(2.0, 0.0);
  const StaticRiskField f = build_static_field(m, c.planner.risk);
  const SimResult r = run_simulation(m, f, {{"a", {0, 0}, {5, 2}, {}}}, {}, c);
  ASSERT_EQ(r.agents.size(), 1u);
  EXPECT_EQ(r.agents[0].status, AgentStatus::Arrived);
  const auto geo = oracle::dijkstra_geodesic(m, {0, 0}, {5, 2}, Connectivity::Eight);
  ASSERT_TRUE(geo.has_value());
  EXPECT_EQ(*r.agents[0].arrival, geo->orthogonal + geo->diagonal);
  EXPECT_NEAR(r.agents[0].path_length, geo->length(), 1e-9);
  EXPECT_TRUE(r.conflicts.empty());
  EXPECT_EQ(r.state.executed[0].front(), (GridIndex{0, 0}));
  EXPECT_EQ(r.state.executed[0].back(), (GridIndex{5, 2}));
}

TEST(Simulation, AgentWithNoRouteFails) {
  const GridMap m = load_ascii("..#..");
  SimulationConfig c = sim_config(2.0, 0.0);
  c.horizon = 12;
  const StaticRiskField f = build_static_field(m, c.planner.risk);
  const SimResult r = run_simulation(m, f, {{"a", {0, 0}, {4, 0}, {}}}, {}, c);
  EXPECT_EQ(r.agents[0].status, AgentStatus::Failed);
  EXPECT_FALSE(r.agents[0].arrival.has_value());
  EXPECT_GT(r.agents[0].plan_failures, 0);
  EXPECT_FALSE(r.replans.front().error.empty());
}

TEST(Simulation, SwapInCorridorWithAlcove) {
  const GridMap m = load_ascii(
      "#############\n"
      "########.####\n"
      "########.####\n"
      "#...........#\n"
      "#############");
  SimulationConfig c = sim_config(3.0, 1.0);
  c.horizon = 120;
  const StaticRiskField f = build_static_field(m, c.planner.risk);
  for (Ordering ordering : {Ordering::Sequential, Ordering::Concurrent}) {
    c.ordering = ordering;
    c.replan_interval = ordering == Ordering::Concurrent ? 1 : 5;
    const SimResult r =
        run_simulation(m, f, {{"a", {1, 3}, {11, 3}, {}}, {"b", {11, 3}, {1, 3}, {}}}, {}, c);
    SCOPED_TRACE(std::string(to_string(ordering)));
    EXPECT_EQ(r.agents[0].status, AgentStatus::Arrived);
    EXPECT_EQ(r.agents[1].status, AgentStatus::Arrived);
    EXPECT_EQ(count_collisions(r.conflicts), 0u);
  }
}

TEST(Simulation, ScriptedObstacleIsAvoided) {
  const GridMap m = load_ascii("##.##\n##.##\n.....\n##.##\n##.##");
  SimulationConfig c = sim_config(10.0, 1.0);
  const StaticRiskField f = build_static_field(m, c.planner.risk);
  DynamicObstacle walker;
  walker.id = "walker";
  for (int y = 0; y < 5; ++y) walker.shared_path.push_back(grid_to_world(m, {2, y}));
  walker.position = walker.shared_path.front();
  const SimResult r = run_simulation(m, f, {{"a", {0, 2}, {4, 2}, {}}}, {walker}, c);
  ASSERT_EQ(r.agents[0].status, AgentStatus::Arrived);
  const Trajectory& tr = r.state.executed[0];
  for (std::size_t t = 0; t < tr.size(); ++t) {
    const GridIndex w{2, std::min<int>(static_cast<int>(t), 4)};
    EXPECT_GE(cell_distance(tr[t], w), 1.5) << "t=" << t;
  }
}

// --- properties ---------------------------------------------------------------

struct RandomSetup {
  GridMap map;
  std::vector<AgentSpec> agents;
};

RandomSetup random_setup(gen::Rng& rng, int size, int agents) {
  for (;;) {
    RandomSetup s;
    s.map = gen::random_map(rng, size, size, 0.1);
    const auto cells = gen::distinct_free_cells(rng, s.map, 2 * static_cast<std::size_t>(agents));
    if (cells.size() < 2 * static_cast<std::size_t>(agents)) continue;
    bool separated = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (std::size_t j = i + 1; j < cells.size(); ++j) separated = separated && cell_distance(cells[i], cells[j]) >= 3.0;
    }
    if (!separated) continue;
    for (int k = 0; k < agents; ++k) {
      s.agents.push_back({"r" + std::to_string(k), cells[2 * static_cast<std::size_t>(k)],
                          cells[2 * static_cast<std::size_t>(k) + 1], {}});
    }
    return s;
  }
}

TEST(SimulationProperty, NoReplanningExecutesThePlan) {
  gen::Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const RandomSetup s = random_setup(rng, 12, 1);
    SimulationConfig c = sim_config(3.0, 0.5);
    c.horizon = 80;
    c.replan_interval = c.horizon;
    const StaticRiskField f = build_static_field(s.map, c.planner.risk);
    const AgentSpec& a = s.agents.front();
    TimedPath plan_alone;
    try {
      plan_alone = plan(a.start, a.goal, s.map, f, {}, c.planner);
    } catch (const PlanningError&) {
      continue;
    }
    const SimResult r = run_simulation(s.map, f, s.agents, {}, c);
    Trajectory expected;
    for (const auto& step : plan_alone.steps) expected.push_back(step.cell);
    ASSERT_EQ(r.state.executed[0], expected) << "trial " << trial;
  }
}

TEST(SimulationProperty, TrajectoriesAreContinuousAndCollisionFree) {
  gen::Rng rng(62);
  for (int trial = 0; trial < 12; ++trial) {
    const RandomSetup s = random_setup(rng, 16, gen::uniform_int(rng, 2, 3));
    SimulationConfig c = sim_config(3.0, 1.0);
    c.horizon = 120;
    c.replan_interval = gen::uniform_int(rng, 1, 6);
    c.planner.watchdog_max_expansions = 100000;
    const StaticRiskField f = build_static_field(s.map, c.planner.risk);
    const SimResult r = run_simulation(s.map, f, s.agents, {}, c);
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
      const Trajectory& tr = r.state.executed[i];
      ASSERT_EQ(tr.front(), s.agents[i].start);
      for (std::size_t t = 1; t < tr.size(); ++t) {
        ASSERT_LE(std::abs(tr[t].x - tr[t - 1].x), 1);
        ASSERT_LE(std::abs(tr[t].y - tr[t - 1].y), 1);
        ASSERT_FALSE(s.map.is_occupied(tr[t]));
      }
      if (r.agents[i].status == AgentStatus::Arrived) ASSERT_EQ(tr.back(), s.agents[i].goal);
    }
    ASSERT_EQ(count_collisions(r.conflicts), 0u) << "trial " << trial;
  }
}

}  // namespace
}  // namespace aspt::coordination
