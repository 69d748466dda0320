#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aspt {

enum class CellState : std::uint8_t { Free, Occupied, Unknown };

enum class Connectivity : int { Four = 4, Eight = 8 };

/// Column/row address of a grid cell. Row 0 is the first row of the source image.
struct GridIndex {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const GridIndex&, const GridIndex&) = default;
};

struct WorldPoint {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const WorldPoint&, const WorldPoint&) = default;
};

struct Neighbor {
  GridIndex cell;
  double step = 1.0;  ///< cells; 1 orthogonal, sqrt(2) diagonal
};

/// Thrown by the map loaders; the message names the offending field or position.
class MapLoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A world coordinate that falls outside the map extents.
class OutOfExtentError : public std::out_of_range {
 public:
  explicit OutOfExtentError(WorldPoint p);
  WorldPoint point() const noexcept { return point_; }

 private:
  WorldPoint point_;
};

/// Immutable 2D occupancy grid, row-major.
class GridMap {
 public:
  GridMap() = default;
  GridMap(int width, int height, double resolution, WorldPoint origin, std::vector<CellState> cells);

  /// Uniform map filled with `fill`.
  static GridMap filled(int width, int height, CellState fill, double resolution = 1.0,
                        WorldPoint origin = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double resolution() const noexcept { return resolution_; }
  WorldPoint origin() const noexcept { return origin_; }
  std::size_t cell_count() const noexcept { return cells_.size(); }
  const std::vector<CellState>& cells() const noexcept { return cells_; }

  bool in_bounds(GridIndex v) const noexcept {
    return v.x >= 0 && v.y >= 0 && v.x < width_ && v.y < height_;
  }
  std::size_t index_of(GridIndex v) const noexcept {
    return static_cast<std::size_t>(v.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(v.x);
  }
  GridIndex cell_of(std::size_t index) const noexcept {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  /// Throws std::out_of_range for out-of-bounds cells.
  CellState at(GridIndex v) const;
  bool is_occupied(GridIndex v) const { return at(v) == CellState::Occupied; }

  /// Copy with one cell changed.
  GridMap with_cell(GridIndex v, CellState state) const;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  WorldPoint origin_{};
  std::vector<CellState> cells_;
};

/// In-bounds neighbors of `v`. Diagonal moves are dropped when either orthogonal
/// cell they pass between is Occupied. Order: +x, -x, +y, -y, then diagonals.
std::vector<Neighbor> neighbors(const GridMap& map, GridIndex v, Connectivity connectivity = Connectivity::Eight);

/// Cell containing `p`; throws OutOfExtentError outside the map.
GridIndex world_to_grid(const GridMap& map, WorldPoint p);

/// Center of cell `v`.
WorldPoint grid_to_world(const GridMap& map, GridIndex v);

/// Euclidean distance between cell centers, in cells.
double cell_distance(GridIndex a, GridIndex b) noexcept;

/// Two cells are adjacent (or equal) under `connectivity`.
bool adjacent_or_same(GridIndex a, GridIndex b, Connectivity connectivity) noexcept;

// --- map I/O -----------------------------------------------------------------

struct PgmThresholds {
  double occupied = 0.65;
  double free = 0.196;
  bool negate = false;
};

/// Parse a map-server style map from raw PGM bytes (P5 or P2) and the YAML
/// metadata text. `resolution` and `origin` are required in the metadata.
GridMap load_pgm_yaml(std::string_view pgm_bytes, std::string_view yaml_meta);

/// Load a map-server YAML file; the `image` key is resolved relative to it.
GridMap load_map_yaml_file(const std::string& yaml_path);

/// '.' Free, '#' Occupied, '?' Unknown. An optional first line
/// "resolution <r>" sets the cell size.
GridMap load_ascii(std::string_view text);

/// Inverse of load_ascii. Emits the resolution header only when it is not 1.
std::string to_ascii(const GridMap& map);

/// Load either an ASCII fixture (.txt/.map) or a map-server YAML (.yaml/.yml).
GridMap load_map_file(const std::string& path);

/// Copy of `map` in which every cell within `radius` cells (Euclidean, center to
/// center) of an Occupied cell is Occupied. radius <= 0 returns the map unchanged.
GridMap inflate(const GridMap& map, double radius);

}  // namespace aspt

template <>
struct std::hash<aspt::GridIndex> {
  std::size_t operator()(const aspt::GridIndex& v) const noexcept {
    return std::hash<std::int64_t>{}((static_cast<std::int64_t>(v.x) << 32) ^ static_cast<std::uint32_t>(v.y));
  }
};
