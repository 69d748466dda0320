#include "aspt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace aspt {

double DynamicObstacle::speed() const noexcept { return std::hypot(velocity.vx, velocity.vy); }

void validate_obstacles(const ObstacleSet& obstacles) {
  std::unordered_set<std::string> seen;
  for (const auto& o : obstacles) {
    if (!seen.insert(o.id).second) throw std::invalid_argument("duplicate obstacle id '" + o.id + "'");
    if (!(o.minor > 0.0) || !(o.major >= o.minor)) {
      throw std::invalid_argument("obstacle '" + o.id + "' must satisfy major >= minor > 0");
    }
  }
}

PredictedPose predict_pose(const DynamicObstacle& obstacle, int n, double dt) {
  if (n < 0) throw std::invalid_argument("prediction step must be non-negative");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (obstacle.has_shared_path()) {
    const auto last = static_cast<int>(obstacle.shared_path.size()) - 1;
    const WorldPoint& p = obstacle.shared_path[static_cast<std::size_t>(std::min(n, last))];
    return {p.x, p.y, obstacle.theta, n};
  }
  const double elapsed = n * dt;
  return {obstacle.position.x + obstacle.velocity.vx * elapsed, obstacle.position.y + obstacle.velocity.vy * elapsed,
          obstacle.theta, n};
}

Ellipse predicted_footprint(const DynamicObstacle& obstacle, int n, double dt) {
  const PredictedPose pose = predict_pose(obstacle, n, dt);
  return {{pose.x, pose.y}, obstacle.major, obstacle.minor, pose.theta};
}

double circle_clearance(const Ellipse& shape, WorldPoint p) noexcept {
  return std::hypot(shape.center.x - p.x, shape.center.y - p.y) - shape.major;
}

double circle_clearance(const DynamicObstacle& obstacle, WorldPoint p) noexcept {
  return circle_clearance(obstacle.footprint(), p);
}

bool ellipse_contains(const Ellipse& shape, WorldPoint p) noexcept {
  const double dx = p.x - shape.center.x;
  const double dy = p.y - shape.center.y;
  const double c = std::cos(shape.theta);
  const double s = std::sin(shape.theta);
  // rotate by -theta into the ellipse frame
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  const double a = u / shape.major;
  const double b = v / shape.minor;
  return a * a + b * b <= 1.0;
}

bool ellipse_contains(const DynamicObstacle& obstacle, WorldPoint p) noexcept {
  return ellipse_contains(obstacle.footprint(), p);
}

std::optional<double> ellipse_clearance_search(const Ellipse& shape, WorldPoint p, double roi, double lambda_step) {
  if (!(lambda_step > 0.0)) throw std::invalid_argument("lambda_step must be positive");
  if (roi < 0.0) return std::nullopt;
  const auto last = static_cast<long>(std::floor(roi / lambda_step + 1e-9));
  // An inflated ellipse lies within the circle of radius major + lambda, so no
  // lambda below (distance - major) can contain p; skip those trials.
  const double dist = std::hypot(p.x - shape.center.x, p.y - shape.center.y);
  const long first = std::max(0L, static_cast<long>(std::floor((dist - shape.major) / lambda_step)) - 1);
  for (long k = first; k <= last; ++k) {
    const double lambda = static_cast<double>(k) * lambda_step;
    if (lambda > roi) break;
    const Ellipse inflated{shape.center, shape.major + lambda, shape.minor + lambda, shape.theta};
    if (ellipse_contains(inflated, p)) return lambda;
  }
  return std::nullopt;
}

double ellipse_clearance(const Ellipse& shape, WorldPoint p, double roi, double lambda_step) {
  return ellipse_clearance_search(shape, p, roi, lambda_step).value_or(roi);
}

double ellipse_clearance(const DynamicObstacle& obstacle, WorldPoint p, double roi, double lambda_step) {
  return ellipse_clearance(obstacle.footprint(), p, roi, lambda_step);
}

double widened_roi(double roi, double speed, double cone_angle, int n, double dt) noexcept {
  return roi + speed * std::tan(cone_angle) * static_cast<double>(n) * dt;
}

double obstacle_risk(double d, double widened, double roi_crit) noexcept {
  if (d < roi_crit) return kInfiniteRisk;
  if (d > widened) return 0.0;
  return std::clamp(99.0 - 98.0 * d / widened, kMinFiniteRisk, 100.0 - kMinFiniteRisk);
}

double dynamic_risk(const ObstacleSet& obstacles, WorldPoint p, int n, double dt, const RiskConfig& config,
                    double lambda_step) {
  if (n < 0) throw std::invalid_argument("prediction step must be non-negative");
  double risk = 0.0;
  for (const auto& obstacle : obstacles) {
    const Ellipse shape = predicted_footprint(obstacle, n, dt);
    const double roi = widened_roi(config.roi, obstacle.speed(), config.cone_angle, n, dt);
    double d = 0.0;
    if (shape.is_circle()) {
      d = circle_clearance(shape, p);
    } else {
      d = ellipse_clearance_search(shape, p, roi, lambda_step).value_or(std::numeric_limits<double>::infinity());
    }
    risk = std::max(risk, obstacle_risk(d, roi, config.roi_crit));
    if (std::isinf(risk)) break;
  }
  return risk;
}

}  // namespace aspt
