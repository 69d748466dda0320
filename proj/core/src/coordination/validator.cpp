#include "aspt/coordination/validator.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

namespace aspt::coordination {
namespace {

GridIndex pose_at(const Trajectory& trajectory, int t) {
  return trajectory[static_cast<std::size_t>(std::min<int>(t, static_cast<int>(trajectory.size()) - 1))];
}

}  // namespace

std::vector<Conflict> validate(const std::vector<Trajectory>& trajectories) {
  std::vector<Conflict> out;
  const std::size_t n = trajectories.size();
  int last = 0;
  for (const auto& tr : trajectories) last = std::max(last, static_cast<int>(tr.size()) - 1);

  // consecutive follow ticks per (leader, follower)
  std::map<std::pair<std::size_t, std::size_t>, int> follow_run;

  for (int t = 0; t <= last; ++t) {
    std::map<GridIndex, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
      if (!trajectories[i].empty()) groups[pose_at(trajectories[i], t)].push_back(i);
    }
    for (const auto& [cell, agents] : groups) {
      if (agents.size() >= 2) out.push_back({ConflictKind::Vertex, agents, {cell}, t});
    }
    if (t == last) break;

    std::unordered_map<GridIndex, std::size_t> occupant;
    for (const auto& [cell, agents] : groups) occupant.emplace(cell, agents.front());
    std::vector<std::optional<std::size_t>> enters(n);  // i moves into the cell j held at t
    for (std::size_t i = 0; i < n; ++i) {
      if (trajectories[i].empty()) continue;
      const GridIndex from = pose_at(trajectories[i], t);
      const GridIndex to = pose_at(trajectories[i], t + 1);
      if (from == to) continue;
      const auto it = occupant.find(to);
      if (it != occupant.end() && it->second != i) enters[i] = it->second;
    }

    for (std::size_t i = 0; i < n; ++i) {
      if (!enters[i]) continue;
      const std::size_t j = *enters[i];
      const GridIndex a0 = pose_at(trajectories[i], t);
      const GridIndex a1 = pose_at(trajectories[i], t + 1);
      const bool exchange = pose_at(trajectories[j], t + 1) == a0;
      if (exchange && i < j) {
        out.push_back({ConflictKind::Edge, {i, j}, {a0, a1}, t});
        out.push_back({ConflictKind::Swap, {i, j}, {a0, a1}, t});
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const bool follows = enters[i] == j && pose_at(trajectories[j], t + 1) != pose_at(trajectories[i], t) &&
                             pose_at(trajectories[j], t + 1) != pose_at(trajectories[j], t);
        int& run = follow_run[{j, i}];
        if (!follows) {
          run = 0;
          continue;
        }
        if (++run == 2) out.push_back({ConflictKind::Follow, {j, i}, {pose_at(trajectories[j], t - 1)}, t - 1});
      }
    }

    std::vector<char> done(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
      if (done[s] || !enters[s]) continue;
      std::vector<std::size_t> chain;
      std::size_t cur = s;
      while (enters[cur] && !done[cur] &&
             std::find(chain.begin(), chain.end(), cur) == chain.end()) {
        chain.push_back(cur);
        cur = *enters[cur];
      }
      const auto pos = std::find(chain.begin(), chain.end(), cur);
      for (std::size_t c : chain) done[c] = 1;
      if (pos == chain.end()) continue;
      std::vector<std::size_t> cycle(pos, chain.end());
      // every member must actually vacate into the next one's cell
      bool rotation = cycle.size() >= 3;
      for (std::size_t k = 0; rotation && k < cycle.size(); ++k) {
        const std::size_t next = cycle[(k + 1) % cycle.size()];
        rotation = pose_at(trajectories[cycle[k]], t + 1) == pose_at(trajectories[next], t);
      }
      if (!rotation) continue;
      std::vector<GridIndex> cells;
      for (std::size_t a : cycle) cells.push_back(pose_at(trajectories[a], t));
      out.push_back({ConflictKind::Cyclic, cycle, cells, t});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Conflict& a, const Conflict& b) { return a.time < b.time; });
  return out;
}

std::size_t count_collisions(const std::vector<Conflict>& conflicts) {
  return static_cast<std::size_t>(std::count_if(conflicts.begin(), conflicts.end(), [](const Conflict& c) {
    return c.kind == ConflictKind::Vertex || c.kind == ConflictKind::Edge || c.kind == ConflictKind::Swap;
  }));
}

}  // namespace aspt::coordination
