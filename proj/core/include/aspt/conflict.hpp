#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "aspt/grid_map.hpp"

namespace aspt {

enum class ConflictKind { Vertex, Edge, Swap, Follow, Cyclic };

std::string_view to_string(ConflictKind kind) noexcept;

/// A joint-plan violation. `agents` index into the trajectory list that was checked.
///
/// vertex: cells = {shared cell}, time = tick of co-occupation.
/// edge/swap: cells = {from, to} of agents[0], time = departure tick.
/// follow: cells = {cell entered}, agents = {leader, follower}, time = first tick of the chain.
/// cyclic: cells = cells vacated by agents[i] in order, time = departure tick.
struct Conflict {
  ConflictKind kind = ConflictKind::Vertex;
  std::vector<std::size_t> agents;
  std::vector<GridIndex> cells;
  int time = 0;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

}  // namespace aspt
