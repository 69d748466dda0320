#include "aspt/harness/random_scenario.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "aspt/risk_field.hpp"

namespace aspt::harness {
namespace {

int chebyshev(GridIndex a, GridIndex b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

}  // namespace

Scenario random_scenario(std::uint64_t seed, const RandomScenarioOptions& opt) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  Scenario s;
  s.name = "random_" + std::to_string(seed);
  s.map_source = "generated";
  s.seed = seed;

  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<CellState> cells(static_cast<std::size_t>(opt.width) * static_cast<std::size_t>(opt.height),
                                 CellState::Free);
    const auto target = static_cast<std::size_t>(opt.obstacle_fill * static_cast<double>(cells.size()));
    std::size_t filled = 0;
    while (filled < target) {
      const int w = uniform(1, 5);
      const int h = uniform(1, 5);
      const int x0 = uniform(0, opt.width - w);
      const int y0 = uniform(0, opt.height - h);
      for (int y = y0; y < y0 + h; ++y) {
        for (int x = x0; x < x0 + w; ++x) {
          auto& c = cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(opt.width) + static_cast<std::size_t>(x)];
          if (c == CellState::Free) ++filled;
          c = CellState::Occupied;
        }
      }
    }
    GridMap map(opt.width, opt.height, opt.resolution, {}, std::move(cells));
    const StaticRiskField field = build_static_field(map, s.simulation.planner.risk);

    // largest region of cells the planner can stand on, with room to manoeuvre
    std::vector<int> label(map.cell_count(), -1);
    std::vector<std::vector<GridIndex>> regions;
    for (std::size_t i = 0; i < map.cell_count(); ++i) {
      const GridIndex start = map.cell_of(i);
      if (label[i] >= 0 || std::isinf(field.combined(start))) continue;
      regions.emplace_back();
      std::deque<GridIndex> queue{start};
      label[i] = static_cast<int>(regions.size()) - 1;
      while (!queue.empty()) {
        const GridIndex v = queue.front();
        queue.pop_front();
        regions.back().push_back(v);
        for (const Neighbor& nb : neighbors(map, v, s.simulation.planner.connectivity)) {
          const std::size_t k = map.index_of(nb.cell);
          if (label[k] >= 0 || std::isinf(field.combined(nb.cell))) continue;
          label[k] = label[i];
          queue.push_back(nb.cell);
        }
      }
    }
    if (regions.empty()) continue;
    auto& region = *std::max_element(regions.begin(), regions.end(),
                                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    std::vector<GridIndex> roomy;
    for (GridIndex v : region) {
      if (field.nearest_occupied(v) >= 2.0) roomy.push_back(v);
    }
    if (roomy.size() < 50) continue;

    const int count = uniform(opt.min_agents, opt.max_agents);
    std::vector<GridIndex> used;
    std::vector<coordination::AgentSpec> agents;
    for (int a = 0; a < count; ++a) {
      auto pick = [&](std::optional<GridIndex> far_from) -> std::optional<GridIndex> {
        for (int tries = 0; tries < 500; ++tries) {
          const GridIndex v = roomy[static_cast<std::size_t>(uniform(0, static_cast<int>(roomy.size()) - 1))];
          if (std::any_of(used.begin(), used.end(), [&](GridIndex u) { return chebyshev(u, v) < opt.min_separation; })) {
            continue;
          }
          if (far_from && cell_distance(*far_from, v) < 0.3 * opt.width) continue;
          return v;
        }
        return std::nullopt;
      };
      const auto start = pick(std::nullopt);
      if (!start) break;
      used.push_back(*start);
      const auto goal = pick(start);
      if (!goal) break;
      used.push_back(*goal);
      agents.push_back({"r" + std::to_string(a), *start, *goal, {}});
    }
    if (static_cast<int>(agents.size()) != count) continue;
    s.map = std::move(map);
    s.agents = std::move(agents);
    validate_scenario(s);
    return s;
  }
  throw ScenarioError("random_scenario: could not place agents for seed " + std::to_string(seed));
}

}  // namespace aspt::harness
