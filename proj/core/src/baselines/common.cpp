#include "aspt/baselines/common.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <tuple>

#include "aspt/planner.hpp"
#include "focal_queue.hpp"

namespace aspt::baselines {
namespace {

constexpr double kEps = 1e-9;

std::uint64_t vertex_key(GridIndex v, int t) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(t)) << 42) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.y) & 0x1FFFFF) << 21) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.x) & 0x1FFFFF));
}

std::uint64_t edge_key(GridIndex from, GridIndex to, int t) {
  const auto dir = static_cast<std::uint64_t>((to.x - from.x + 1) * 3 + (to.y - from.y + 1));
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(t) & 0xFFFFF) << 44) | (dir << 40) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from.y) & 0xFFFFF) << 20) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from.x) & 0xFFFFF));
}

bool reachable(const GridMap& map, GridIndex start, GridIndex goal, Connectivity connectivity) {
  std::vector<char> seen(map.cell_count(), 0);
  std::deque<GridIndex> queue{start};
  seen[map.index_of(start)] = 1;
  while (!queue.empty()) {
    const GridIndex v = queue.front();
    queue.pop_front();
    if (v == goal) return true;
    for (const Neighbor& nb : neighbors(map, v, connectivity)) {
      if (map.is_occupied(nb.cell)) continue;
      char& s = seen[map.index_of(nb.cell)];
      if (s == 0) {
        s = 1;
        queue.push_back(nb.cell);
      }
    }
  }
  return false;
}

std::string cell_text(GridIndex v) { return "(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")"; }

}  // namespace

void BaselineConfig::validate() const {
  if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
  if (inflation < 0.0) throw std::invalid_argument("inflation must be non-negative");
  if (node_budget == 0) throw std::invalid_argument("node_budget must be positive");
}

ConstraintTable::ConstraintTable(const std::vector<Constraint>& constraints, std::size_t agent) {
  for (const auto& c : constraints) {
    if (c.agent != agent) continue;
    if (c.kind == ConstraintKind::Vertex) {
      vertex_.insert(vertex_key(c.cell, c.time));
      auto [it, inserted] = last_vertex_.try_emplace(c.cell, c.time);
      if (!inserted) it->second = std::max(it->second, c.time);
    } else {
      edge_.insert(edge_key(c.cell, c.to, c.time));
    }
  }
}

bool ConstraintTable::vertex_blocked(GridIndex cell, int t) const { return vertex_.count(vertex_key(cell, t)) != 0; }

bool ConstraintTable::edge_blocked(GridIndex from, GridIndex to, int t_arrival) const {
  return !edge_.empty() && edge_.count(edge_key(from, to, t_arrival)) != 0;
}

int ConstraintTable::last_vertex_time(GridIndex cell) const {
  const auto it = last_vertex_.find(cell);
  return it == last_vertex_.end() ? -1 : it->second;
}

ReservationTable::ReservationTable(const std::vector<TimedPath>& paths) {
  for (const auto& p : paths) add(p);
}

void ReservationTable::add(const TimedPath& path) {
  if (path.empty()) return;
  ++paths_;
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const TimedCell& s = path.steps[i];
    ++vertex_[vertex_key(s.cell, s.t)];
    auto [it, inserted] = last_.try_emplace(s.cell, s.t);
    if (!inserted) it->second = std::max(it->second, s.t);
    if (i + 1 < path.steps.size()) {
      const TimedCell& next = path.steps[i + 1];
      // stored reversed so a query for from -> to finds paths moving to -> from
      if (next.cell != s.cell) ++swap_[edge_key(next.cell, s.cell, next.t)];
    }
  }
  rest_from_[path.back().cell].push_back(path.back().t + 1);
  last_[path.back().cell] = std::numeric_limits<int>::max();
}

int ReservationTable::vertex_count(GridIndex cell, int t) const {
  int count = 0;
  if (const auto it = vertex_.find(vertex_key(cell, t)); it != vertex_.end()) count += it->second;
  if (const auto it = rest_from_.find(cell); it != rest_from_.end()) {
    for (int from : it->second) count += from <= t ? 1 : 0;
  }
  return count;
}

int ReservationTable::swap_count(GridIndex from, GridIndex to, int t_arrival) const {
  if (swap_.empty()) return 0;
  const auto it = swap_.find(edge_key(from, to, t_arrival));
  return it == swap_.end() ? 0 : it->second;
}

int ReservationTable::last_occupied(GridIndex cell) const {
  const auto it = last_.find(cell);
  return it == last_.end() ? -1 : it->second;
}

double grid_distance(GridIndex a, GridIndex b, Connectivity connectivity) noexcept {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  if (connectivity == Connectivity::Four) return dx + dy;
  return (dx + dy) + (std::sqrt(2.0) - 2.0) * std::min(dx, dy);
}

LowLevelResult focal_space_time_search(GridIndex start, GridIndex goal, const GridMap& map,
                                       const ConstraintTable& constraints, const ReservationTable& hard,
                                       const ReservationTable& soft, double omega, const BaselineConfig& config) {
  if (omega < 1.0) throw std::invalid_argument("omega must be >= 1");
  if (!map.in_bounds(start) || !map.in_bounds(goal) || map.is_occupied(start) || map.is_occupied(goal)) {
    throw NoPathError("invalid endpoint " + cell_text(start) + " -> " + cell_text(goal));
  }
  if (constraints.vertex_blocked(start, 0) || hard.vertex_count(start, 0) > 0) {
    throw NoPathError("start " + cell_text(start) + " is blocked at t = 0");
  }
  if (hard.last_occupied(goal) == std::numeric_limits<int>::max() || !reachable(map, start, goal, config.connectivity)) {
    throw NoPathError("goal " + cell_text(goal) + " is unreachable");
  }

  struct Node {
    GridIndex v;
    int t;
    double g;
    double f;
    int conflicts;
    std::optional<std::size_t> parent;
  };
  struct StateInfo {
    std::size_t node;
    double g;
    bool closed;
  };
  using OpenKey = std::tuple<double, int, int, int>;
  using FocalKey = std::tuple<int, double, double, int, int, int>;

  std::vector<Node> nodes;
  std::unordered_map<std::uint64_t, StateInfo> states;
  detail::FocalQueue<OpenKey, FocalKey> queue(omega);

  auto add = [&](GridIndex v, int t, double g, int conflicts, std::optional<std::size_t> parent) {
    const std::uint64_t key = vertex_key(v, t);
    const auto it = states.find(key);
    if (it != states.end()) {
      if (g >= it->second.g - kEps) return;
      if (!it->second.closed) queue.erase(it->second.node);
    }
    const double f = g + grid_distance(v, goal, config.connectivity);
    nodes.push_back({v, t, g, f, conflicts, parent});
    const std::size_t id = nodes.size() - 1;
    states[key] = {id, g, false};
    queue.push(id, f, f, {-g, t, v.y, v.x}, {conflicts, f, -g, t, v.y, v.x});
  };

  add(start, 0, 0.0, soft.vertex_count(start, 0), std::nullopt);
  const int goal_free_after = std::max(constraints.last_vertex_time(goal), hard.last_occupied(goal));

  LowLevelResult result;
  while (!queue.empty()) {
    const double f_min = queue.min_lower_bound();
    const std::size_t id = queue.pop();
    const Node node = nodes[id];
    states[vertex_key(node.v, node.t)].closed = true;
    ++result.expansions;
    if (result.expansions > config.low_level_budget) {
      throw NoPathError("low-level search exceeded its expansion budget");
    }

    if (node.v == goal && node.t >= goal_free_after) {
      std::vector<std::size_t> chain;
      for (std::optional<std::size_t> i = id; i.has_value(); i = nodes[*i].parent) chain.push_back(*i);
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) result.path.steps.push_back({nodes[*it].v, nodes[*it].t});
      result.cost = node.g;
      result.path.total_cost = node.g;
      result.path.total_length = result.path.length_in_cells() * map.resolution();
      result.lower_bound = std::min(f_min, node.f);
      result.conflicts = node.conflicts;
      return result;
    }

    const int t_next = node.t + 1;
    if (t_next > config.horizon) continue;
    for (const Neighbor& nb : neighbors(map, node.v, config.connectivity)) {
      if (map.is_occupied(nb.cell)) continue;
      if (constraints.vertex_blocked(nb.cell, t_next) || constraints.edge_blocked(node.v, nb.cell, t_next)) continue;
      if (hard.vertex_count(nb.cell, t_next) > 0 || hard.swap_count(node.v, nb.cell, t_next) > 0) continue;
      const int c = node.conflicts + soft.vertex_count(nb.cell, t_next) + soft.swap_count(node.v, nb.cell, t_next);
      add(nb.cell, t_next, node.g + nb.step, c, id);
    }
    if (!constraints.vertex_blocked(node.v, t_next) && hard.vertex_count(node.v, t_next) == 0) {
      add(node.v, t_next, node.g + 1.0, node.conflicts + soft.vertex_count(node.v, t_next), id);
    }
  }
  throw NoPathError("no path from " + cell_text(start) + " to " + cell_text(goal) + " within horizon " +
                    std::to_string(config.horizon));
}

LowLevelResult space_time_astar(GridIndex start, GridIndex goal, const GridMap& map,
                                const ConstraintTable& constraints, const std::vector<TimedPath>& obstacle_paths,
                                const BaselineConfig& config) {
  return focal_space_time_search(start, goal, map, constraints, ReservationTable(obstacle_paths), ReservationTable{},
                                 1.0, config);
}

std::optional<Conflict> detect_first_conflict(const std::vector<TimedPath>& paths) {
  int last = 0;
  for (const auto& p : paths) {
    if (!p.empty()) last = std::max(last, p.end_time());
  }
  for (int t = 0; t <= last; ++t) {
    std::unordered_map<GridIndex, std::size_t> at;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (paths[i].empty()) continue;
      const GridIndex c = paths[i].cell_at(t);
      const auto [it, inserted] = at.try_emplace(c, i);
      if (!inserted) return Conflict{ConflictKind::Vertex, {it->second, i}, {c}, t};
    }
    if (t == last) break;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (paths[i].empty()) continue;
      const GridIndex a0 = paths[i].cell_at(t);
      const GridIndex a1 = paths[i].cell_at(t + 1);
      if (a0 == a1) continue;
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        if (paths[j].empty()) continue;
        if (paths[j].cell_at(t) == a1 && paths[j].cell_at(t + 1) == a0) {
          return Conflict{ConflictKind::Swap, {i, j}, {a0, a1}, t};
        }
      }
    }
  }
  return std::nullopt;
}

int count_conflicts(const std::vector<TimedPath>& paths) {
  int last = 0;
  for (const auto& p : paths) {
    if (!p.empty()) last = std::max(last, p.end_time());
  }
  int count = 0;
  for (int t = 0; t <= last; ++t) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (paths[i].empty()) continue;
      const GridIndex a0 = paths[i].cell_at(t);
      const GridIndex a1 = paths[i].cell_at(t + 1);
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        if (paths[j].empty()) continue;
        if (paths[j].cell_at(t) == a0) ++count;
        if (t < last && a0 != a1 && paths[j].cell_at(t) == a1 && paths[j].cell_at(t + 1) == a0) ++count;
      }
    }
  }
  return count;
}

GridMap prepare_map(const GridMap& map, const std::vector<Agent>& agents, const BaselineConfig& config) {
  if (config.inflation <= 0.0) return map;
  const GridMap inflated = inflate(map, config.inflation);
  std::vector<CellState> cells = inflated.cells();
  for (const auto& a : agents) {
    for (GridIndex v : {a.start, a.goal}) {
      if (map.in_bounds(v)) cells[map.index_of(v)] = map.at(v);
    }
  }
  return GridMap(map.width(), map.height(), map.resolution(), map.origin(), std::move(cells));
}

void validate_agents(const GridMap& map, const std::vector<Agent>& agents) {
  std::unordered_set<GridIndex> starts;
  std::unordered_set<GridIndex> goals;
  std::unordered_set<std::string> ids;
  for (const auto& a : agents) {
    if (!ids.insert(a.id).second) throw std::invalid_argument("duplicate agent id '" + a.id + "'");
    for (GridIndex v : {a.start, a.goal}) {
      if (!map.in_bounds(v)) throw std::invalid_argument("agent '" + a.id + "' endpoint " + cell_text(v) + " is out of bounds");
      if (map.is_occupied(v)) throw std::invalid_argument("agent '" + a.id + "' endpoint " + cell_text(v) + " is occupied");
    }
    if (!starts.insert(a.start).second) throw std::invalid_argument("duplicate start " + cell_text(a.start));
    if (!goals.insert(a.goal).second) throw std::invalid_argument("duplicate goal " + cell_text(a.goal));
  }
}

double sum_of_costs(const std::vector<TimedPath>& paths) {
  double total = 0.0;
  for (const auto& p : paths) total += p.total_cost;
  return total;
}

}  // namespace aspt::baselines
