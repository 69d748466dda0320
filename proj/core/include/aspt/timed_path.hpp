#pragma once

#include <cstddef>
#include <vector>

#include "aspt/grid_map.hpp"

namespace aspt {

struct TimedCell {
  GridIndex cell;
  int t = 0;

  friend constexpr bool operator==(const TimedCell&, const TimedCell&) = default;
};

/// A schedule of one cell per timestep. Repeated consecutive cells are waits.
struct TimedPath {
  std::vector<TimedCell> steps;
  double total_cost = 0.0;
  double total_length = 0.0;  ///< meters

  bool empty() const noexcept { return steps.empty(); }
  std::size_t size() const noexcept { return steps.size(); }
  const TimedCell& front() const { return steps.front(); }
  const TimedCell& back() const { return steps.back(); }
  int start_time() const { return steps.front().t; }
  int end_time() const { return steps.back().t; }

  /// Cell occupied at time `t`: the first cell before the path starts and the
  /// last cell after it ends.
  GridIndex cell_at(int t) const;

  /// Number of wait steps (consecutive repeats).
  std::size_t wait_count() const;

  /// Sum of step lengths in cells (waits contribute 0).
  double length_in_cells() const;

  /// Timesteps increase by exactly one and each step is a wait or a move under `connectivity`.
  bool is_well_formed(Connectivity connectivity) const;

  /// Copy of the suffix starting at time `t` (inclusive). Empty if t > end_time().
  TimedPath tail_from(int t) const;

  friend bool operator==(const TimedPath& a, const TimedPath& b) { return a.steps == b.steps; }
};

/// Geometric length of a sequence of cells, in cells.
double polyline_length(const std::vector<GridIndex>& cells);

}  // namespace aspt
