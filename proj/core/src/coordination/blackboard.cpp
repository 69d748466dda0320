#include "aspt/coordination/blackboard.hpp"

#include <algorithm>

namespace aspt::coordination {
namespace {

Footprint resolved(const Footprint& f, const GridMap& map) {
  Footprint out = f;
  if (out.major <= 0.0) out.major = 0.5 * map.resolution();
  if (out.minor <= 0.0) out.minor = out.major;
  return out;
}

}  // namespace

void PathBlackboard::publish(const std::string& id, TimedPath path, int time) {
  auto entry = std::make_shared<const PublishedPath>(PublishedPath{std::move(path), time});
  std::lock_guard lock(mutex_);
  entries_[id] = std::move(entry);
}

PathBlackboard::Snapshot PathBlackboard::snapshot() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

std::size_t PathBlackboard::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

DynamicObstacle stationary_obstacle(const std::string& id, GridIndex cell, const Footprint& footprint,
                                    const GridMap& map) {
  const Footprint f = resolved(footprint, map);
  DynamicObstacle o;
  o.id = id;
  o.position = grid_to_world(map, cell);
  o.major = f.major;
  o.minor = f.minor;
  o.theta = f.theta;
  return o;
}

ObstacleSet paths_to_obstacles(const PathBlackboard::Snapshot& snapshot, const std::string& exclude,
                               const std::map<std::string, Footprint>& footprints, int current_time,
                               const GridMap& map, double dt) {
  ObstacleSet out;
  for (const auto& [id, entry] : snapshot) {
    if (id == exclude || !entry || entry->path.empty()) continue;
    const TimedPath& path = entry->path;
    const auto fp = footprints.find(id);
    DynamicObstacle o = stationary_obstacle(id, path.cell_at(current_time),
                                            fp == footprints.end() ? Footprint{} : fp->second, map);
    for (int t = current_time; t <= std::max(current_time, path.end_time()); ++t) {
      o.shared_path.push_back(grid_to_world(map, path.cell_at(t)));
    }
    if (o.shared_path.size() >= 2) {
      o.velocity = {(o.shared_path[1].x - o.shared_path[0].x) / dt, (o.shared_path[1].y - o.shared_path[0].y) / dt};
    }
    out.push_back(std::move(o));
  }
  return out;
}

DynamicObstacle advance_obstacle(const DynamicObstacle& obstacle, int ticks, double dt) {
  DynamicObstacle out = obstacle;
  const PredictedPose pose = predict_pose(obstacle, ticks, dt);
  out.position = {pose.x, pose.y};
  if (obstacle.has_shared_path()) {
    const auto skip = std::min<std::size_t>(static_cast<std::size_t>(ticks), obstacle.shared_path.size() - 1);
    out.shared_path.assign(obstacle.shared_path.begin() + static_cast<std::ptrdiff_t>(skip), obstacle.shared_path.end());
  }
  return out;
}

}  // namespace aspt::coordination
