#include "aspt/grid_map.hpp"

#include <cmath>
#include <sstream>

namespace aspt {

namespace {

std::string describe(WorldPoint p) {
  std::ostringstream os;
  os << "world point (" << p.x << ", " << p.y << ") is outside the map extents";
  return os.str();
}

constexpr GridIndex kOrthogonal[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
constexpr GridIndex kDiagonal[4] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};

}  // namespace

OutOfExtentError::OutOfExtentError(WorldPoint p) : std::out_of_range(describe(p)), point_(p) {}

GridMap::GridMap(int width, int height, double resolution, WorldPoint origin, std::vector<CellState> cells)
    : width_(width), height_(height), resolution_(resolution), origin_(origin), cells_(std::move(cells)) {
  if (width < 0 || height < 0) {
    throw std::invalid_argument("grid dimensions must be non-negative");
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw std::invalid_argument("grid resolution must be positive");
  }
  if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("cell count does not match width x height");
  }
}

GridMap GridMap::filled(int width, int height, CellState fill, double resolution, WorldPoint origin) {
  return GridMap(width, height, resolution, origin,
                 std::vector<CellState>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill));
}

CellState GridMap::at(GridIndex v) const {
  if (!in_bounds(v)) {
    throw std::out_of_range("cell (" + std::to_string(v.x) + ", " + std::to_string(v.y) + ") is out of bounds");
  }
  return cells_[index_of(v)];
}

GridMap GridMap::with_cell(GridIndex v, CellState state) const {
  GridMap copy = *this;
  if (!in_bounds(v)) {
    throw std::out_of_range("cell (" + std::to_string(v.x) + ", " + std::to_string(v.y) + ") is out of bounds");
  }
  copy.cells_[index_of(v)] = state;
  return copy;
}

std::vector<Neighbor> neighbors(const GridMap& map, GridIndex v, Connectivity connectivity) {
  if (!map.in_bounds(v)) {
    throw std::out_of_range("neighbors() called with out-of-bounds cell (" + std::to_string(v.x) + ", " +
                            std::to_string(v.y) + ")");
  }
  std::vector<Neighbor> out;
  out.reserve(8);
  for (const auto& d : kOrthogonal) {
    const GridIndex n{v.x + d.x, v.y + d.y};
    if (map.in_bounds(n)) out.push_back({n, 1.0});
  }
  if (connectivity == Connectivity::Eight) {
    for (const auto& d : kDiagonal) {
      const GridIndex n{v.x + d.x, v.y + d.y};
      if (!map.in_bounds(n)) continue;
      // no corner cutting
      if (map.is_occupied({v.x + d.x, v.y}) || map.is_occupied({v.x, v.y + d.y})) continue;
      out.push_back({n, std::sqrt(2.0)});
    }
  }
  return out;
}

GridIndex world_to_grid(const GridMap& map, WorldPoint p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw OutOfExtentError(p);
  const double fx = std::floor((p.x - map.origin().x) / map.resolution());
  const double fy = std::floor((p.y - map.origin().y) / map.resolution());
  if (fx < 0.0 || fy < 0.0 || fx >= map.width() || fy >= map.height()) throw OutOfExtentError(p);
  return {static_cast<int>(fx), static_cast<int>(fy)};
}

WorldPoint grid_to_world(const GridMap& map, GridIndex v) {
  return {map.origin().x + (v.x + 0.5) * map.resolution(), map.origin().y + (v.y + 0.5) * map.resolution()};
}

double cell_distance(GridIndex a, GridIndex b) noexcept {
  return std::hypot(static_cast<double>(a.x - b.x), static_cast<double>(a.y - b.y));
}

bool adjacent_or_same(GridIndex a, GridIndex b, Connectivity connectivity) noexcept {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  if (connectivity == Connectivity::Four) return dx + dy <= 1;
  return dx <= 1 && dy <= 1;
}

GridMap inflate(const GridMap& map, double radius) {
  if (radius <= 0.0) return map;
  const int reach = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  std::vector<CellState> cells = map.cells();
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.at({x, y}) != CellState::Occupied) continue;
      for (int dy = -reach; dy <= reach; ++dy) {
        for (int dx = -reach; dx <= reach; ++dx) {
          const GridIndex n{x + dx, y + dy};
          if (!map.in_bounds(n) || static_cast<double>(dx * dx + dy * dy) > r2) continue;
          cells[map.index_of(n)] = CellState::Occupied;
        }
      }
    }
  }
  return GridMap(map.width(), map.height(), map.resolution(), map.origin(), std::move(cells));
}

}  // namespace aspt
