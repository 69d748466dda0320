#pragma once

#include <vector>

#include "aspt/conflict.hpp"
#include "aspt/grid_map.hpp"

namespace aspt::coordination {

/// One pose per tick from t = 0; shorter trajectories rest at their last cell.
using Trajectory = std::vector<GridIndex>;

/// Audit executed trajectories for all five conflict kinds, earliest first.
///
/// vertex: two or more agents in one cell at one tick (one record per group).
/// edge + swap: a pair exchanging cells across a tick; both records are emitted.
/// follow: an agent entering the cell another vacated on the same tick, on at
///   least two consecutive ticks; one record per such chain.
/// cyclic: k >= 3 agents whose moves rotate through each other's cells.
std::vector<Conflict> validate(const std::vector<Trajectory>& trajectories);

/// Count of vertex, edge and swap records.
std::size_t count_collisions(const std::vector<Conflict>& conflicts);

}  // namespace aspt::coordination
