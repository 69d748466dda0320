#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aspt/baselines/common.hpp"

namespace aspt::baselines {

struct SafeInterval {
  GridIndex cell;
  int start = 0;
  int end = 0;  ///< inclusive

  friend bool operator==(const SafeInterval&, const SafeInterval&) = default;
};

/// Per-cell sorted, disjoint, maximal safe intervals over [0, horizon].
class SafeIntervalTable {
 public:
  SafeIntervalTable(const GridMap& map, const std::vector<TimedCell>& schedule, int horizon);

  const std::vector<SafeInterval>& at(GridIndex cell) const;
  int horizon() const noexcept { return horizon_; }

 private:
  int width_ = 0;
  int horizon_ = 0;
  std::vector<std::vector<SafeInterval>> intervals_;
};

SafeIntervalTable build_safe_intervals(const GridMap& map, const std::vector<TimedCell>& schedule, int horizon);

/// Occupied (cell, t) pairs of `paths` for t in [0, horizon], resting at the final cell.
std::vector<TimedCell> schedule_from_paths(const std::vector<TimedPath>& paths, int horizon);

/// Single-agent SIPP against moving obstacles. Cost-equivalent to space_time_astar.
/// Throws NoPathError.
LowLevelResult sipp_plan(GridIndex start, GridIndex goal, const GridMap& map,
                         const std::vector<TimedPath>& obstacle_paths, const BaselineConfig& config);

struct PrioritizedResult {
  std::vector<std::optional<TimedPath>> paths;  ///< nullopt where the agent failed
  std::vector<std::string> errors;              ///< empty where the agent succeeded
  std::size_t expansions = 0;

  bool all_succeeded() const;
};

/// Agents plan in list order; each earlier successful path is a moving obstacle
/// for the later ones. Failures are recorded per agent.
PrioritizedResult prioritized_sipp(const std::vector<Agent>& agents, const GridMap& map,
                                   const BaselineConfig& config);

}  // namespace aspt::baselines
