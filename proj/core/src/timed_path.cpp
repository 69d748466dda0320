#include "aspt/timed_path.hpp"

#include <stdexcept>

namespace aspt {

GridIndex TimedPath::cell_at(int t) const {
  if (steps.empty()) throw std::logic_error("cell_at() on an empty path");
  if (t <= steps.front().t) return steps.front().cell;
  if (t >= steps.back().t) return steps.back().cell;
  return steps[static_cast<std::size_t>(t - steps.front().t)].cell;
}

std::size_t TimedPath::wait_count() const {
  std::size_t waits = 0;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i].cell == steps[i - 1].cell) ++waits;
  }
  return waits;
}

double TimedPath::length_in_cells() const {
  double length = 0.0;
  for (std::size_t i = 1; i < steps.size(); ++i) length += cell_distance(steps[i - 1].cell, steps[i].cell);
  return length;
}

bool TimedPath::is_well_formed(Connectivity connectivity) const {
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i].t != steps[i - 1].t + 1) return false;
    if (!adjacent_or_same(steps[i - 1].cell, steps[i].cell, connectivity)) return false;
  }
  return true;
}

TimedPath TimedPath::tail_from(int t) const {
  TimedPath out;
  for (const auto& s : steps) {
    if (s.t >= t) out.steps.push_back(s);
  }
  return out;
}

double polyline_length(const std::vector<GridIndex>& cells) {
  double length = 0.0;
  for (std::size_t i = 1; i < cells.size(); ++i) length += cell_distance(cells[i - 1], cells[i]);
  return length;
}

}  // namespace aspt
