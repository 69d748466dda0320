#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "aspt/dynamics.hpp"
#include "aspt/grid_map.hpp"
#include "aspt/risk_field.hpp"
#include "aspt/timed_path.hpp"

namespace aspt {

struct PlannerConfig {
  Connectivity connectivity = Connectivity::Eight;
  RiskConfig risk{};                       ///< static lengths in cells
  double time_cost_weight = 1.0;           ///< weight of the per-edge timestep term
  double wait_cost = 1.0;                  ///< base cost of one wait step
  /// Multipliers on the finite parts of R_c + R_p and of R_o. Infinite risk stays
  /// impassable whatever the weight.
  double static_risk_weight = 1.0;
  double dynamic_risk_weight = 1.0;
  std::size_t watchdog_max_expansions = 200000;
  double watchdog_max_seconds = 5.0;
  double dt = 1.0;                         ///< seconds per timestep
  double unknown_heuristic_factor = 50.0;  ///< heuristic multiplier on Unknown cells
  double lambda_step = kDefaultLambdaStep; ///< ellipse inflation step, meters
  /// How many timesteps past arrival the goal must stay passable. Negative
  /// selects the longest shared obstacle path.
  int goal_hold_steps = -1;

  /// Throws std::invalid_argument on negative weights, dt <= 0 or an invalid RiskConfig.
  void validate() const;
};

struct SearchNode {
  GridIndex v;
  double g = 0.0;  ///< accumulated cost from the start
  double h = 0.0;  ///< heuristic estimate to the goal
  double f = 0.0;  ///< g + h
  int n = 0;       ///< timestep since planning started
  int w = 0;       ///< waits taken at this cell before timestep n
  std::optional<std::size_t> predecessor;
};

enum class PlanFailure { NoPath, WatchdogTimeout, InvalidEndpoint };

class PlanningError : public std::runtime_error {
 public:
  PlanningError(PlanFailure kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  PlanFailure kind() const noexcept { return kind_; }

 private:
  PlanFailure kind_;
};

struct NoPathError : PlanningError {
  explicit NoPathError(const std::string& what) : PlanningError(PlanFailure::NoPath, what) {}
};
struct WatchdogTimeout : PlanningError {
  explicit WatchdogTimeout(const std::string& what) : PlanningError(PlanFailure::WatchdogTimeout, what) {}
};
struct InvalidEndpoint : PlanningError {
  explicit InvalidEndpoint(const std::string& what) : PlanningError(PlanFailure::InvalidEndpoint, what) {}
};

struct PlanStats {
  std::size_t expansions = 0;
  std::size_t generated = 0;
  double seconds = 0.0;
};

/// Euclidean cell distance to the goal, scaled by unknown_heuristic_factor on Unknown cells.
double heuristic(GridIndex v, GridIndex goal, CellState state_at_v, const PlannerConfig& config);

/// Composite cost evaluator over one map, static field and obstacle snapshot.
/// Caches obstacle predictions per timestep; not thread-safe, cheap to construct.
class RiskModel {
 public:
  RiskModel(const GridMap& map, const StaticRiskField& field, const ObstacleSet& obstacles,
            const PlannerConfig& config);

  /// R_c + R_p of the cell.
  double static_risk(GridIndex v) const { return field_.combined(v); }
  /// R_o of the cell center `n` timesteps ahead; identical to dynamic_risk().
  double dynamic_risk_at(GridIndex v, int n) const;
  /// Cost of moving (or waiting, when to == from.v) from `from` into `to`.
  double edge_cost(const SearchNode& from, GridIndex to, double step_length) const;

  /// Whether costs depend on the timestep (obstacles present or time weight > 0).
  bool time_dependent() const noexcept { return !obstacles_.empty() || config_.time_cost_weight > 0.0; }
  bool has_obstacles() const noexcept { return !obstacles_.empty(); }
  /// True when every obstacle follows a finite shared path or stands still.
  bool eventually_static() const noexcept;
  /// Longest shared obstacle path, used as the default goal hold horizon.
  int longest_shared_path() const noexcept;

 private:
  const std::vector<Ellipse>& footprints_at(int n) const;

  const GridMap& map_;
  const StaticRiskField& field_;
  const ObstacleSet& obstacles_;
  const PlannerConfig& config_;
  RiskConfig metric_risk_;
  std::vector<double> speeds_;
  mutable std::vector<std::vector<Ellipse>> footprint_cache_;
};

/// R_d + R_c + R_p + R_o + time term for the step from `from` into `to_cell`.
double edge_cost(const SearchNode& from, GridIndex to_cell, double step_length, const GridMap& map,
                 const StaticRiskField& field, const ObstacleSet& obstacles, const PlannerConfig& config);

/// Time-expanded risk-weighted A* with wait actions. Timesteps of the result start at 0.
/// Throws NoPathError, WatchdogTimeout or InvalidEndpoint.
TimedPath plan(GridIndex start, GridIndex goal, const GridMap& map, const StaticRiskField& field,
               const ObstacleSet& obstacles, const PlannerConfig& config, PlanStats* stats = nullptr);

/// Fresh plan from the current state; `previous` is discarded. Obstacles must be
/// aligned so prediction step 0 is `current_time`. Timesteps start at `current_time`.
TimedPath replan_from(GridIndex current, int current_time, const TimedPath& previous, GridIndex goal,
                      const GridMap& map, const StaticRiskField& field, const ObstacleSet& obstacles,
                      const PlannerConfig& config, PlanStats* stats = nullptr);

}  // namespace aspt
