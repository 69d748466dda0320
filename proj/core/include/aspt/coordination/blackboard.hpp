#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "aspt/dynamics.hpp"
#include "aspt/grid_map.hpp"
#include "aspt/timed_path.hpp"

namespace aspt::coordination {

struct PublishedPath {
  TimedPath path;  ///< absolute timesteps
  int published_at = 0;
};

/// Shared store of the agents' latest plans. Publication replaces a whole entry;
/// snapshots are immutable and unaffected by later publications.
class PathBlackboard {
 public:
  using Snapshot = std::map<std::string, std::shared_ptr<const PublishedPath>>;

  void publish(const std::string& id, TimedPath path, int time);
  Snapshot snapshot() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  Snapshot entries_;
};

struct Footprint {
  double major = 0.0;  ///< meters; 0 selects half a cell
  double minor = 0.0;
  double theta = 0.0;
};

/// Every published path except `exclude` as a DynamicObstacle aligned so that
/// prediction step 0 is `current_time`. Agents past their path end rest at the
/// final cell. Footprints default to a circle of half a cell.
ObstacleSet paths_to_obstacles(const PathBlackboard::Snapshot& snapshot, const std::string& exclude,
                               const std::map<std::string, Footprint>& footprints, int current_time,
                               const GridMap& map, double dt = 1.0);

/// A stationary obstacle for an agent standing at `cell`.
DynamicObstacle stationary_obstacle(const std::string& id, GridIndex cell, const Footprint& footprint,
                                    const GridMap& map);

/// `obstacle` as seen `ticks` timesteps later: moved along its script or velocity,
/// with the shared path trimmed so index 0 is the new present.
DynamicObstacle advance_obstacle(const DynamicObstacle& obstacle, int ticks, double dt = 1.0);

}  // namespace aspt::coordination
