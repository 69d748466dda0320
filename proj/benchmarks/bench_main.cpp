#include <benchmark/benchmark.h>

#include <random>

#include "aspt/baselines/cbs.hpp"
#include "aspt/baselines/sipp.hpp"
#include "aspt/planner.hpp"

namespace {

using namespace aspt;

GridMap random_map(int size, double fill, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution occupied(fill);
  std::vector<CellState> cells(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
  for (auto& c : cells) c = occupied(rng) ? CellState::Occupied : CellState::Free;
  // keep the corners open for start and goal
  cells.front() = CellState::Free;
  cells.back() = CellState::Free;
  return GridMap(size, size, 1.0, {}, std::move(cells));
}

void BM_StaticField(benchmark::State& state) {
  const GridMap m = random_map(static_cast<int>(state.range(0)), 0.15, 1);
  RiskConfig c;
  for (auto _ : state) benchmark::DoNotOptimize(build_static_field(m, c));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_StaticField)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oN);

void BM_PlanStatic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridMap m = random_map(n, 0.1, 2);
  PlannerConfig c;
  c.risk.roi = 4.0;
  c.risk.roi_crit = 0.5;
  const StaticRiskField f = build_static_field(m, c.risk);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(plan({0, 0}, {n - 1, n - 1}, m, f, {}, c));
    } catch (const PlanningError&) {
    }
  }
}
BENCHMARK(BM_PlanStatic)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PlanWithObstacles(benchmark::State& state) {
  const int n = 40;
  const GridMap m = GridMap::filled(n, n, CellState::Free);
  PlannerConfig c;
  c.risk.roi = 4.0;
  c.risk.roi_crit = 1.0;
  const StaticRiskField f = build_static_field(m, c.risk);
  ObstacleSet obstacles;
  for (int k = 0; k < state.range(0); ++k) {
    DynamicObstacle o;
    o.id = "o" + std::to_string(k);
    for (int t = 0; t < n; ++t) o.shared_path.push_back(grid_to_world(m, {5 + 6 * k, (t + 7 * k) % n}));
    o.position = o.shared_path.front();
    obstacles.push_back(o);
  }
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(plan({0, 20}, {n - 1, 20}, m, f, obstacles, c));
    } catch (const PlanningError&) {
    }
  }
}
BENCHMARK(BM_PlanWithObstacles)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Cbs(benchmark::State& state) {
  const GridMap m = random_map(16, 0.1, 3);
  std::vector<baselines::Agent> agents;
  for (int k = 0; k < state.range(0); ++k) {
    agents.push_back({"a" + std::to_string(k), {0, 2 * k + 1}, {15, 14 - 2 * k}});
  }
  const GridMap open = baselines::prepare_map(m, agents, {});
  std::vector<CellState> cells = open.cells();
  for (const auto& a : agents) {
    cells[open.index_of(a.start)] = CellState::Free;
    cells[open.index_of(a.goal)] = CellState::Free;
  }
  const GridMap fixed(16, 16, 1.0, {}, std::move(cells));
  baselines::BaselineConfig c;
  c.horizon = 64;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(baselines::cbs_plan(agents, fixed, c));
    } catch (const std::exception&) {
    }
  }
}
BENCHMARK(BM_Cbs)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Sipp(benchmark::State& state) {
  const int n = 32;
  const GridMap m = GridMap::filled(n, n, CellState::Free);
  std::vector<TimedPath> schedule;
  for (int k = 0; k < state.range(0); ++k) {
    TimedPath p;
    for (int t = 0; t < n; ++t) p.steps.push_back({{3 + 3 * k, (t + 5 * k) % n}, t});
    schedule.push_back(p);
  }
  baselines::BaselineConfig c;
  c.horizon = 200;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(baselines::sipp_plan({0, 16}, {n - 1, 16}, m, schedule, c));
    } catch (const PlanningError&) {
    }
  }
}
BENCHMARK(BM_Sipp)->Arg(2)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
