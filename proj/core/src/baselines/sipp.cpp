#include "aspt/baselines/sipp.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#include "aspt/planner.hpp"

namespace aspt::baselines {
namespace {

constexpr double kEps = 1e-9;

struct Label {
  GridIndex cell;
  std::size_t interval;
  int t;
  double g;
  double f;
  std::optional<std::size_t> parent;
  bool stale = false;
};

struct QueueEntry {
  double f;
  double neg_g;
  int t;
  int y;
  int x;
  std::size_t id;

  bool operator>(const QueueEntry& o) const {
    return std::tie(f, neg_g, t, y, x, id) > std::tie(o.f, o.neg_g, o.t, o.y, o.x, o.id);
  }
};

}  // namespace

SafeIntervalTable::SafeIntervalTable(const GridMap& map, const std::vector<TimedCell>& schedule, int horizon)
    : width_(map.width()), horizon_(horizon) {
  if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
  std::vector<std::vector<int>> busy(map.cell_count());
  for (const auto& s : schedule) {
    if (!map.in_bounds(s.cell) || s.t < 0 || s.t > horizon) continue;
    busy[map.index_of(s.cell)].push_back(s.t);
  }
  intervals_.resize(map.cell_count());
  for (std::size_t i = 0; i < busy.size(); ++i) {
    auto& times = busy[i];
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const GridIndex cell = map.cell_of(i);
    if (map.is_occupied(cell)) continue;
    int from = 0;
    for (int t : times) {
      if (t > from) intervals_[i].push_back({cell, from, t - 1});
      from = t + 1;
    }
    if (from <= horizon) intervals_[i].push_back({cell, from, horizon});
  }
}

const std::vector<SafeInterval>& SafeIntervalTable::at(GridIndex cell) const {
  return intervals_.at(static_cast<std::size_t>(cell.y) * static_cast<std::size_t>(width_) +
                       static_cast<std::size_t>(cell.x));
}

SafeIntervalTable build_safe_intervals(const GridMap& map, const std::vector<TimedCell>& schedule, int horizon) {
  return SafeIntervalTable(map, schedule, horizon);
}

std::vector<TimedCell> schedule_from_paths(const std::vector<TimedPath>& paths, int horizon) {
  std::vector<TimedCell> schedule;
  for (const auto& p : paths) {
    if (p.empty()) continue;
    for (int t = std::max(0, p.start_time()); t <= horizon; ++t) schedule.push_back({p.cell_at(t), t});
  }
  return schedule;
}

LowLevelResult sipp_plan(GridIndex start, GridIndex goal, const GridMap& map,
                         const std::vector<TimedPath>& obstacle_paths, const BaselineConfig& config) {
  if (!map.in_bounds(start) || !map.in_bounds(goal) || map.is_occupied(start) || map.is_occupied(goal)) {
    throw NoPathError("invalid SIPP endpoint");
  }
  const int horizon = config.horizon;
  const SafeIntervalTable table(map, schedule_from_paths(obstacle_paths, horizon), horizon);
  const ReservationTable moves(obstacle_paths);

  const auto& start_intervals = table.at(start);
  if (start_intervals.empty() || start_intervals.front().start != 0) {
    throw NoPathError("start cell is not safe at t = 0");
  }

  std::vector<Label> labels;
  std::vector<std::vector<std::vector<std::size_t>>> frontier(map.cell_count());
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;

  auto h = [&](GridIndex v) { return grid_distance(v, goal, config.connectivity); };

  auto insert = [&](GridIndex cell, std::size_t interval, int t, double g, std::optional<std::size_t> parent) {
    auto& per_cell = frontier[map.index_of(cell)];
    if (per_cell.empty()) per_cell.resize(table.at(cell).size());
    auto& existing = per_cell[interval];
    for (std::size_t id : existing) {
      const Label& l = labels[id];
      if (!l.stale && l.t <= t && l.g + (t - l.t) <= g + kEps) return;
    }
    for (std::size_t id : existing) {
      Label& l = labels[id];
      if (!l.stale && t <= l.t && g + (l.t - t) <= l.g + kEps) l.stale = true;
    }
    const double f = g + h(cell);
    labels.push_back({cell, interval, t, g, f, parent});
    existing.push_back(labels.size() - 1);
    open.push({f, -g, t, cell.y, cell.x, labels.size() - 1});
  };

  insert(start, 0, 0, 0.0, std::nullopt);

  LowLevelResult result;
  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    if (labels[top.id].stale) continue;
    const Label label = labels[top.id];
    ++result.expansions;
    if (result.expansions > config.low_level_budget) throw NoPathError("SIPP exceeded its expansion budget");

    const SafeInterval& here = table.at(label.cell)[label.interval];
    if (label.cell == goal && here.end == horizon) {
      std::vector<std::size_t> chain;
      for (std::optional<std::size_t> i = top.id; i.has_value(); i = labels[*i].parent) chain.push_back(*i);
      std::reverse(chain.begin(), chain.end());
      for (std::size_t k = 0; k < chain.size(); ++k) {
        const Label& l = labels[chain[k]];
        const int until = k + 1 < chain.size() ? labels[chain[k + 1]].t - 1 : l.t;
        for (int t = l.t; t <= until; ++t) result.path.steps.push_back({l.cell, t});
      }
      result.cost = label.g;
      result.lower_bound = label.f;
      result.path.total_cost = label.g;
      result.path.total_length = result.path.length_in_cells() * map.resolution();
      return result;
    }

    for (const Neighbor& nb : neighbors(map, label.cell, config.connectivity)) {
      if (map.is_occupied(nb.cell)) continue;
      const auto& intervals = table.at(nb.cell);
      for (std::size_t k = 0; k < intervals.size(); ++k) {
        const SafeInterval& next = intervals[k];
        const int earliest = std::max(label.t, next.start - 1);
        const int latest = std::min({here.end, next.end - 1, horizon - 1});
        for (int depart = earliest; depart <= latest; ++depart) {
          if (moves.swap_count(label.cell, nb.cell, depart + 1) > 0) continue;
          insert(nb.cell, k, depart + 1, label.g + (depart - label.t) + nb.step, top.id);
          break;
        }
      }
    }
  }
  throw NoPathError("SIPP found no safe-interval route");
}

bool PrioritizedResult::all_succeeded() const {
  return std::all_of(paths.begin(), paths.end(), [](const auto& p) { return p.has_value(); });
}

PrioritizedResult prioritized_sipp(const std::vector<Agent>& agents, const GridMap& map,
                                   const BaselineConfig& config) {
  config.validate();
  validate_agents(map, agents);
  PrioritizedResult result;
  std::vector<TimedPath> committed;
  for (const auto& agent : agents) {
    try {
      LowLevelResult r = sipp_plan(agent.start, agent.goal, map, committed, config);
      result.expansions += r.expansions;
      committed.push_back(r.path);
      result.paths.emplace_back(std::move(r.path));
      result.errors.emplace_back();
    } catch (const NoPathError& e) {
      result.paths.emplace_back(std::nullopt);
      result.errors.emplace_back(e.what());
    }
  }
  return result;
}

}  // namespace aspt::baselines
