#pragma once

#include <limits>
#include <string>
#include <vector>

#include "aspt/grid_map.hpp"

namespace aspt {

inline constexpr double kInfiniteRisk = std::numeric_limits<double>::infinity();

/// Smallest finite risk a clamped formula may return; keeps finite risks inside (0, 100).
inline constexpr double kMinFiniteRisk = 1e-6;

/// Region-of-interest parameters shared by the static and dynamic risk layers.
///
/// The static layer measures distances in cells. The dynamic layer measures
/// clearances in meters; see `in_meters()`.
struct RiskConfig {
  double roi = 10.0;          ///< risk decays to zero beyond this distance
  double roi_crit = 1.0;      ///< distances strictly below this are impassable
  double unknown_risk = 50.0; ///< occupancy risk of an Unknown cell
  double cone_angle = 0.44;   ///< prediction-uncertainty half angle (rad) widening the dynamic ROI

  /// Throws std::invalid_argument when roi <= 0, roi_crit < 0, roi_crit >= roi or unknown_risk <= 0.
  void validate() const;

  /// Copy with roi / roi_crit converted from cells to meters.
  RiskConfig in_meters(double resolution) const;
};

/// Occupied -> infinity, Free -> 0, Unknown -> config.unknown_risk.
double occupancy_risk(CellState state, const RiskConfig& config);

/// Unclamped linear decay 99 - (d - 1) * 98 / roi.
double proximity_formula(double d, double roi) noexcept;

/// Proximity risk for a cell whose nearest occupied cell is `d` cells away.
/// d < roi_crit -> infinity, d > roi -> 0, otherwise the decay clamped into (0, 100).
double proximity_risk(double d, const RiskConfig& config);

/// Per-cell static risk layers of a map.
class StaticRiskField {
 public:
  StaticRiskField() = default;
  StaticRiskField(int width, int height, RiskConfig config, std::vector<double> occupancy,
                  std::vector<double> proximity, std::vector<double> nearest_occupied);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const RiskConfig& config() const noexcept { return config_; }

  double occupancy(GridIndex v) const { return occupancy_.at(index(v)); }
  double proximity(GridIndex v) const { return proximity_.at(index(v)); }
  /// R_c + R_p; infinity when either is.
  double combined(GridIndex v) const { return occupancy(v) + proximity(v); }
  /// Euclidean distance in cells to the nearest Occupied cell (infinity if none).
  double nearest_occupied(GridIndex v) const { return nearest_.at(index(v)); }

  const std::vector<double>& occupancy_layer() const noexcept { return occupancy_; }
  const std::vector<double>& proximity_layer() const noexcept { return proximity_; }

  /// Copy with every finite risk multiplied by `factor` (> 0); infinities stay infinite.
  StaticRiskField scaled(double factor) const;

 private:
  std::size_t index(GridIndex v) const {
    return static_cast<std::size_t>(v.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(v.x);
  }

  int width_ = 0;
  int height_ = 0;
  RiskConfig config_{};
  std::vector<double> occupancy_;
  std::vector<double> proximity_;
  std::vector<double> nearest_;
};

/// Exact squared Euclidean distance (in cells^2) from every cell to the nearest
/// Occupied cell; -1 where the map has no Occupied cell at all.
std::vector<long long> squared_distance_transform(const GridMap& map);

StaticRiskField build_static_field(const GridMap& map, const RiskConfig& config);

/// Binary PGM (P5) of the combined static risk: infinity black, 0 white, linear over [0, 100].
std::string export_risk_pgm(const StaticRiskField& field);

}  // namespace aspt
