#include "aspt/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <unordered_map>
#include <utility>
#include <vector>

namespace aspt {

void PlannerConfig::validate() const {
  risk.validate();
  if (time_cost_weight < 0.0 || wait_cost < 0.0 || unknown_heuristic_factor < 0.0 || static_risk_weight < 0.0 ||
      dynamic_risk_weight < 0.0) {
    throw std::invalid_argument("planner weights must be non-negative");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (watchdog_max_seconds < 0.0) throw std::invalid_argument("watchdog_max_seconds must be non-negative");
  if (!(lambda_step > 0.0)) throw std::invalid_argument("lambda_step must be positive");
}

double heuristic(GridIndex v, GridIndex goal, CellState state_at_v, const PlannerConfig& config) {
  const double d = cell_distance(v, goal);
  return state_at_v == CellState::Unknown ? config.unknown_heuristic_factor * d : d;
}

RiskModel::RiskModel(const GridMap& map, const StaticRiskField& field, const ObstacleSet& obstacles,
                     const PlannerConfig& config)
    : map_(map), field_(field), obstacles_(obstacles), config_(config), metric_risk_(config.risk.in_meters(map.resolution())) {
  if (field.width() != map.width() || field.height() != map.height()) {
    throw std::invalid_argument("risk field does not match map dimensions");
  }
  speeds_.reserve(obstacles.size());
  for (const auto& o : obstacles) speeds_.push_back(o.speed());
}

const std::vector<Ellipse>& RiskModel::footprints_at(int n) const {
  while (static_cast<int>(footprint_cache_.size()) <= n) {
    const int step = static_cast<int>(footprint_cache_.size());
    std::vector<Ellipse> shapes;
    shapes.reserve(obstacles_.size());
    for (const auto& o : obstacles_) shapes.push_back(predicted_footprint(o, step, config_.dt));
    footprint_cache_.push_back(std::move(shapes));
  }
  return footprint_cache_[static_cast<std::size_t>(n)];
}

double RiskModel::dynamic_risk_at(GridIndex v, int n) const {
  if (obstacles_.empty()) return 0.0;
  const WorldPoint p = grid_to_world(map_, v);
  const auto& shapes = footprints_at(n);
  double risk = 0.0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const Ellipse& shape = shapes[i];
    const double roi = widened_roi(metric_risk_.roi, speeds_[i], metric_risk_.cone_angle, n, config_.dt);
    const double center_distance = std::hypot(p.x - shape.center.x, p.y - shape.center.y);
    // beyond the widened ROI for either footprint form
    if (center_distance - shape.major > roi) continue;
    double d = 0.0;
    if (shape.is_circle()) {
      d = circle_clearance(shape, p);
    } else {
      d = ellipse_clearance_search(shape, p, roi, config_.lambda_step).value_or(std::numeric_limits<double>::infinity());
    }
    risk = std::max(risk, obstacle_risk(d, roi, metric_risk_.roi_crit));
    if (std::isinf(risk)) break;
  }
  return risk;
}

double RiskModel::edge_cost(const SearchNode& from, GridIndex to, double step_length) const {
  const double r_static = static_risk(to);
  if (std::isinf(r_static)) return kInfiniteRisk;
  const int arrival = from.n + 1;
  const double r_dynamic = dynamic_risk_at(to, arrival);
  if (std::isinf(r_dynamic)) return kInfiniteRisk;
  return step_length + config_.static_risk_weight * r_static + config_.dynamic_risk_weight * r_dynamic +
         config_.time_cost_weight * static_cast<double>(arrival);
}

bool RiskModel::eventually_static() const noexcept {
  for (const auto& o : obstacles_) {
    if (!o.has_shared_path() && o.speed() > 0.0) return false;
  }
  return true;
}

int RiskModel::longest_shared_path() const noexcept {
  int longest = 0;
  for (const auto& o : obstacles_) longest = std::max(longest, static_cast<int>(o.shared_path.size()));
  return longest;
}

double edge_cost(const SearchNode& from, GridIndex to_cell, double step_length, const GridMap& map,
                 const StaticRiskField& field, const ObstacleSet& obstacles, const PlannerConfig& config) {
  return RiskModel(map, field, obstacles, config).edge_cost(from, to_cell, step_length);
}

namespace {

struct OpenEntry {
  double f;
  double g;
  int n;
  int y;
  int x;
  std::size_t seq;
  std::size_t node;
};

/// Lowest f, then highest g, then lexicographic (n, y, x), then insertion order.
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const noexcept {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    if (a.n != b.n) return a.n > b.n;
    if (a.y != b.y) return a.y > b.y;
    if (a.x != b.x) return a.x > b.x;
    return a.seq > b.seq;
  }
};

class Search {
 public:
  Search(GridIndex start, GridIndex goal, const GridMap& map, const StaticRiskField& field,
         const ObstacleSet& obstacles, const PlannerConfig& config)
      : start_(start), goal_(goal), map_(map), config_(config), model_(map, field, obstacles, config) {
    hold_steps_ = config.goal_hold_steps >= 0 ? config.goal_hold_steps : model_.longest_shared_path();
  }

  TimedPath run(PlanStats* stats) {
    using Clock = std::chrono::steady_clock;
    const auto started = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };
    auto finish_stats = [&] {
      if (stats != nullptr) {
        stats->expansions = expansions_;
        stats->generated = nodes_.size();
        stats->seconds = elapsed();
      }
    };

    if (std::isinf(model_.static_risk(goal_))) {
      finish_stats();
      throw NoPathError("goal lies inside the critical risk band");
    }

    if (!statically_reachable()) {
      finish_stats();
      throw NoPathError("goal is not connected to the start through passable cells");
    }

    if (goal_blocked_forever()) {
      finish_stats();
      throw NoPathError("goal stays inside an obstacle's critical band after every obstacle has stopped");
    }

    push({start_, 0.0, 0.0, 0.0, 0, 0, std::nullopt});

    while (!open_.empty()) {
      if (expansions_ >= config_.watchdog_max_expansions ||
          ((expansions_ & 0xFF) == 0 && elapsed() > config_.watchdog_max_seconds)) {
        finish_stats();
        throw WatchdogTimeout("watchdog: search exceeded " + std::to_string(expansions_) + " expansions / " +
                              std::to_string(elapsed()) + " s");
      }
      const OpenEntry top = open_.top();
      open_.pop();
      const SearchNode node = nodes_[top.node];
      const std::uint64_t k = key(node.v, node.n);
      if (closed_.count(k) != 0) continue;
      closed_.emplace(k, top.node);
      ++expansions_;

      if (node.v == goal_ && goal_holds_from(node.n)) {
        finish_stats();
        return reconstruct(top.node);
      }
      expand(top.node);
    }
    finish_stats();
    throw NoPathError("open list exhausted: no valid path exists");
  }

 private:
  std::uint64_t key(GridIndex v, int n) const {
    const auto cell = static_cast<std::uint64_t>(map_.index_of(v));
    if (!model_.time_dependent()) return cell;
    return static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(map_.cell_count()) + cell;
  }

  void push(SearchNode node) {
    node.h = heuristic(node.v, goal_, map_.at(node.v), config_);
    node.f = node.g + node.h;
    const std::uint64_t k = key(node.v, node.n);
    if (closed_.count(k) != 0) return;
    if (dominated(node)) return;
    auto [it, inserted] = best_g_.try_emplace(k, node.g);
    if (!inserted) {
      if (node.g >= it->second) return;
      it->second = node.g;
    }
    nodes_.push_back(node);
    open_.push({node.f, node.g, node.n, node.v.y, node.v.x, seq_++, nodes_.size() - 1});
  }

  // Without obstacles the only time dependence is the time term, which grows
  // with n, so an arrival that is both later and no cheaper can never win.
  bool dominated(const SearchNode& node) {
    if (model_.has_obstacles() || !model_.time_dependent()) return false;
    auto& labels = labels_[map_.index_of(node.v)];
    for (const auto& [n, g] : labels) {
      if (n <= node.n && g <= node.g) return true;
    }
    std::erase_if(labels, [&](const std::pair<int, double>& l) { return l.first >= node.n && l.second >= node.g; });
    labels.emplace_back(node.n, node.g);
    return false;
  }

  void expand(std::size_t index) {
    const SearchNode node = nodes_[index];
    bool saw_dynamic_risk = false;
    for (const Neighbor& nb : neighbors(map_, node.v, config_.connectivity)) {
      if (model_.has_obstacles() && model_.dynamic_risk_at(nb.cell, node.n + 1) != 0.0) saw_dynamic_risk = true;
      const double cost = model_.edge_cost(node, nb.cell, nb.step);
      if (std::isinf(cost)) continue;
      push({nb.cell, node.g + cost, 0.0, 0.0, node.n + 1, 0, index});
    }
    if (!model_.has_obstacles()) return;
    if (!saw_dynamic_risk && model_.dynamic_risk_at(node.v, node.n + 1) == 0.0) return;
    // Wait in place: same cell one timestep later, sharing the predecessor.
    const double cost = model_.edge_cost(node, node.v, config_.wait_cost);
    if (std::isinf(cost)) return;
    push({node.v, node.g + cost, 0.0, 0.0, node.n + 1, node.w + 1, node.predecessor});
  }

  // Obstacles only ever remove edges, so a goal cut off in the static graph
  // cannot be reached at any timestep.
  bool statically_reachable() const {
    std::vector<char> seen(map_.cell_count(), 0);
    std::vector<GridIndex> stack{start_};
    seen[map_.index_of(start_)] = 1;
    while (!stack.empty()) {
      const GridIndex v = stack.back();
      stack.pop_back();
      if (v == goal_) return true;
      for (const Neighbor& nb : neighbors(map_, v, config_.connectivity)) {
        const std::size_t i = map_.index_of(nb.cell);
        if (seen[i] != 0 || std::isinf(model_.static_risk(nb.cell))) continue;
        seen[i] = 1;
        stack.push_back(nb.cell);
      }
    }
    return false;
  }

  // Once every obstacle has reached the end of its shared path (or never moves)
  // the scene is static, so a goal inside a critical band then is never reachable.
  bool goal_blocked_forever() const {
    if (!model_.has_obstacles() || !model_.eventually_static()) return false;
    return std::isinf(model_.dynamic_risk_at(goal_, model_.longest_shared_path()));
  }

  bool goal_holds_from(int n) const {
    if (!model_.has_obstacles()) return true;
    for (int t = n + 1; t <= n + hold_steps_; ++t) {
      if (std::isinf(model_.dynamic_risk_at(goal_, t))) return false;
    }
    return true;
  }

  TimedPath reconstruct(std::size_t goal_index) const {
    std::vector<std::size_t> chain;
    for (std::optional<std::size_t> i = goal_index; i.has_value(); i = nodes_[*i].predecessor) chain.push_back(*i);
    TimedPath path;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const SearchNode& node = nodes_[*it];
      for (int t = node.n - node.w; t <= node.n; ++t) path.steps.push_back({node.v, t});
    }
    path.total_cost = nodes_[goal_index].g;
    path.total_length = path.length_in_cells() * map_.resolution();
    return path;
  }

  GridIndex start_;
  GridIndex goal_;
  const GridMap& map_;
  const PlannerConfig& config_;
  RiskModel model_;
  int hold_steps_ = 0;

  std::vector<SearchNode> nodes_;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open_;
  std::unordered_map<std::uint64_t, double> best_g_;
  std::unordered_map<std::size_t, std::vector<std::pair<int, double>>> labels_;
  std::unordered_map<std::uint64_t, std::size_t> closed_;
  std::size_t seq_ = 0;
  std::size_t expansions_ = 0;
};

void check_endpoint(const GridMap& map, GridIndex v, const char* which) {
  if (!map.in_bounds(v)) {
    throw InvalidEndpoint(std::string(which) + " (" + std::to_string(v.x) + ", " + std::to_string(v.y) +
                          ") is out of bounds");
  }
  if (map.is_occupied(v)) {
    throw InvalidEndpoint(std::string(which) + " (" + std::to_string(v.x) + ", " + std::to_string(v.y) +
                          ") is occupied");
  }
}

}  // namespace

TimedPath plan(GridIndex start, GridIndex goal, const GridMap& map, const StaticRiskField& field,
               const ObstacleSet& obstacles, const PlannerConfig& config, PlanStats* stats) {
  config.validate();
  check_endpoint(map, start, "start");
  check_endpoint(map, goal, "goal");
  Search search(start, goal, map, field, obstacles, config);
  return search.run(stats);
}

TimedPath replan_from(GridIndex current, int current_time, const TimedPath& /*previous*/, GridIndex goal,
                      const GridMap& map, const StaticRiskField& field, const ObstacleSet& obstacles,
                      const PlannerConfig& config, PlanStats* stats) {
  TimedPath path = plan(current, goal, map, field, obstacles, config, stats);
  for (auto& step : path.steps) step.t += current_time;
  return path;
}

}  // namespace aspt
