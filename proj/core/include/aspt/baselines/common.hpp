#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "aspt/conflict.hpp"
#include "aspt/grid_map.hpp"
#include "aspt/timed_path.hpp"

namespace aspt::baselines {

struct Agent {
  std::string id;
  GridIndex start;
  GridIndex goal;
};

struct BaselineConfig {
  Connectivity connectivity = Connectivity::Eight;
  double inflation = 0.0;            ///< cells; applied by prepare_map()
  int horizon = 512;                 ///< last timestep the low level may reach
  std::size_t node_budget = 100000;  ///< CBS/ECBS constraint-tree nodes
  std::size_t low_level_budget = 2000000;

  void validate() const;
};

class NoSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ConstraintKind { Vertex, Edge };

/// Forbids `agent` from being at `cell` at `time` (vertex) or from moving
/// `cell` -> `to` arriving at `time` (edge).
struct Constraint {
  std::size_t agent = 0;
  ConstraintKind kind = ConstraintKind::Vertex;
  GridIndex cell;
  GridIndex to;
  int time = 0;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Constraints of a single agent, indexed for the low-level search.
class ConstraintTable {
 public:
  ConstraintTable() = default;
  ConstraintTable(const std::vector<Constraint>& constraints, std::size_t agent);

  bool vertex_blocked(GridIndex cell, int t) const;
  bool edge_blocked(GridIndex from, GridIndex to, int t_arrival) const;
  /// Latest vertex constraint on `cell`, or -1.
  int last_vertex_time(GridIndex cell) const;

 private:
  std::unordered_set<std::uint64_t> vertex_;
  std::unordered_set<std::uint64_t> edge_;
  std::unordered_map<GridIndex, int> last_vertex_;
};

/// Counts of other trajectories occupying cells and traversing edges. Paths start
/// at t = 0 and rest at their final cell forever.
class ReservationTable {
 public:
  ReservationTable() = default;
  explicit ReservationTable(const std::vector<TimedPath>& paths);

  void add(const TimedPath& path);

  int vertex_count(GridIndex cell, int t) const;
  /// Number of paths moving `to` -> `from` arriving at `t_arrival` (a swap with from -> to).
  int swap_count(GridIndex from, GridIndex to, int t_arrival) const;
  /// Latest tick any path occupies `cell`; int max if one rests there, -1 if never.
  int last_occupied(GridIndex cell) const;
  bool empty() const noexcept { return paths_ == 0; }

 private:
  std::unordered_map<std::uint64_t, int> vertex_;
  std::unordered_map<std::uint64_t, int> swap_;
  std::unordered_map<GridIndex, std::vector<int>> rest_from_;
  std::unordered_map<GridIndex, int> last_;
  std::size_t paths_ = 0;
};

struct LowLevelResult {
  TimedPath path;
  double cost = 0.0;         ///< unit move/wait costs up to the final arrival
  double lower_bound = 0.0;  ///< minimum f in OPEN when the search stopped
  std::size_t expansions = 0;
  int conflicts = 0;         ///< soft conflicts along the path (focal search only)
};

/// Octile distance for 8-connectivity, Manhattan for 4.
double grid_distance(GridIndex a, GridIndex b, Connectivity connectivity) noexcept;

/// Optimal single-agent search over (cell, timestep) with unit move/wait costs.
/// Never enters a constrained or obstacle-occupied (cell, t), never swaps with an
/// obstacle, and only accepts the goal once nothing occupies it afterwards.
/// Throws NoPathError.
LowLevelResult space_time_astar(GridIndex start, GridIndex goal, const GridMap& map,
                                const ConstraintTable& constraints, const std::vector<TimedPath>& obstacle_paths,
                                const BaselineConfig& config);

/// Bounded-suboptimal variant: returns a path of cost <= omega * optimal, preferring
/// the fewest conflicts with `soft` inside the focal band. omega = 1 and an empty
/// `soft` table reproduce space_time_astar exactly.
LowLevelResult focal_space_time_search(GridIndex start, GridIndex goal, const GridMap& map,
                                       const ConstraintTable& constraints, const ReservationTable& hard,
                                       const ReservationTable& soft, double omega, const BaselineConfig& config);

/// Earliest vertex or swap conflict, vertex first at equal times. Paths rest at
/// their final cell after they end.
std::optional<Conflict> detect_first_conflict(const std::vector<TimedPath>& paths);

/// Number of conflicting (agent pair, tick) events among `paths`.
int count_conflicts(const std::vector<TimedPath>& paths);

/// Inflate by config.inflation, then restore the agents' endpoints to their original states.
GridMap prepare_map(const GridMap& map, const std::vector<Agent>& agents, const BaselineConfig& config);

/// Throws std::invalid_argument unless every endpoint is in bounds and not
/// Occupied, and starts and goals are pairwise distinct.
void validate_agents(const GridMap& map, const std::vector<Agent>& agents);

/// Sum of path costs.
double sum_of_costs(const std::vector<TimedPath>& paths);

}  // namespace aspt::baselines
