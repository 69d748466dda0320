#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aspt/grid_map.hpp"
#include "aspt/risk_field.hpp"

namespace aspt {

struct Velocity {
  double vx = 0.0;  ///< m/s
  double vy = 0.0;  ///< m/s
};

/// Oriented ellipse footprint; `major` lies along `theta`.
struct Ellipse {
  WorldPoint center;
  double major = 0.5;  ///< semi-axis, meters
  double minor = 0.5;  ///< semi-axis, meters
  double theta = 0.0;  ///< radians

  bool is_circle() const noexcept { return major == minor; }
};

/// A moving obstacle. Either follows `shared_path` (one world pose per timestep,
/// index 0 = now) or, when that is empty, moves at constant velocity.
struct DynamicObstacle {
  std::string id;
  WorldPoint position;
  double major = 0.5;
  double minor = 0.5;
  double theta = 0.0;
  Velocity velocity;
  std::vector<WorldPoint> shared_path;

  bool has_shared_path() const noexcept { return !shared_path.empty(); }
  /// Speed magnitude in m/s.
  double speed() const noexcept;
  Ellipse footprint() const noexcept { return {position, major, minor, theta}; }
};

using ObstacleSet = std::vector<DynamicObstacle>;

/// Throws std::invalid_argument on duplicate ids or axes violating major >= minor > 0.
void validate_obstacles(const ObstacleSet& obstacles);

struct PredictedPose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  int n = 0;
};

/// Pose `n` timesteps ahead. Shared paths are clamped to their final pose;
/// otherwise the pose is extrapolated at constant velocity.
PredictedPose predict_pose(const DynamicObstacle& obstacle, int n, double dt);

/// Footprint at the predicted pose.
Ellipse predicted_footprint(const DynamicObstacle& obstacle, int n, double dt);

/// Signed distance from `p` to a circle of radius `major`; negative inside.
double circle_clearance(const Ellipse& shape, WorldPoint p) noexcept;
double circle_clearance(const DynamicObstacle& obstacle, WorldPoint p) noexcept;

/// True iff `p` lies inside or on the rotated ellipse.
bool ellipse_contains(const Ellipse& shape, WorldPoint p) noexcept;
bool ellipse_contains(const DynamicObstacle& obstacle, WorldPoint p) noexcept;

inline constexpr double kDefaultLambdaStep = 0.1;

/// Smallest inflation lambda = k * lambda_step <= roi for which the ellipse with
/// axes (major + lambda, minor + lambda) contains `p`; nullopt when none does.
std::optional<double> ellipse_clearance_search(const Ellipse& shape, WorldPoint p, double roi,
                                               double lambda_step = kDefaultLambdaStep);

/// ellipse_clearance_search, returning `roi` when no inflation within budget contains `p`.
double ellipse_clearance(const Ellipse& shape, WorldPoint p, double roi, double lambda_step = kDefaultLambdaStep);
double ellipse_clearance(const DynamicObstacle& obstacle, WorldPoint p, double roi,
                         double lambda_step = kDefaultLambdaStep);

/// ROI widened by the prediction cone: roi + speed * tan(cone_angle) * n * dt.
double widened_roi(double roi, double speed, double cone_angle, int n, double dt) noexcept;

/// Risk of a single obstacle at clearance `d` (meters) against an already widened ROI.
/// d < roi_crit -> infinity; d > widened -> 0; else 99 - 98 d / widened clamped into (0, 100).
double obstacle_risk(double d, double widened, double roi_crit) noexcept;

/// Dynamic-obstacle risk R_o at `p`, `n` timesteps ahead.
/// `config` lengths (roi, roi_crit) are in meters here, matching the clearances.
double dynamic_risk(const ObstacleSet& obstacles, WorldPoint p, int n, double dt, const RiskConfig& config,
                    double lambda_step = kDefaultLambdaStep);

}  // namespace aspt
