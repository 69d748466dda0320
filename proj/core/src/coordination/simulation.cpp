#include "aspt/coordination/simulation.hpp"

#include <chrono>
#include <future>
#include <set>
#include <stdexcept>

namespace aspt::coordination {
namespace {

struct PlanOutcome {
  std::optional<TimedPath> path;
  double seconds = 0.0;
  std::size_t expansions = 0;
  std::string error;
};

std::string cell_text(GridIndex v) { return "(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")"; }

class Simulation {
 public:
  Simulation(const GridMap& map, const StaticRiskField& field, const std::vector<AgentSpec>& agents,
             const ObstacleSet& scripted, const SimulationConfig& config)
      : map_(map), field_(field), agents_(agents), scripted_(scripted), config_(config), paths_(agents.size()) {
    for (const auto& a : agents) footprints_[a.id] = a.footprint;
    state_.poses.reserve(agents.size());
    for (const auto& a : agents) {
      state_.poses.push_back(a.start);
      state_.status.push_back(AgentStatus::Planning);
      state_.executed.push_back({a.start});
    }
    result_.agents.resize(agents.size());
  }

  SimResult run() {
    for (int t = 0;; ++t) {
      state_.clock = t;
      if (t % config_.replan_interval == 0) replan_all(t);
      update_status(t);
      if (t >= config_.horizon || finished(t)) break;
      for (std::size_t i = 0; i < agents_.size(); ++i) {
        state_.poses[i] = paths_[i].empty() ? state_.poses[i] : paths_[i].cell_at(t + 1);
        state_.executed[i].push_back(state_.poses[i]);
      }
    }
    finalize();
    return std::move(result_);
  }

 private:
  /// Published paths and scripted obstacles, plus agents that have not published
  /// yet, which are assumed to stand still.
  struct View {
    ObstacleSet published;
    ObstacleSet unpublished;
  };

  View view_for(std::size_t agent, const PathBlackboard::Snapshot& snapshot, int t) const {
    View view;
    view.published = paths_to_obstacles(snapshot, agents_[agent].id, footprints_, t, map_, config_.planner.dt);
    for (const auto& o : scripted_) view.published.push_back(advance_obstacle(o, t, config_.planner.dt));
    for (std::size_t j = 0; j < agents_.size(); ++j) {
      if (j == agent || snapshot.count(agents_[j].id) != 0) continue;
      view.unpublished.push_back(stationary_obstacle(agents_[j].id, state_.poses[j], agents_[j].footprint, map_));
    }
    return view;
  }

  PlanOutcome plan_agent(std::size_t agent, const View& view, int t) const {
    PlanOutcome out;
    const auto started = std::chrono::steady_clock::now();
    auto attempt = [&](const ObstacleSet& obstacles) {
      PlanStats stats;
      try {
        out.path = replan_from(state_.poses[agent], t, paths_[agent], agents_[agent].goal, map_, field_, obstacles,
                               config_.planner, &stats);
        out.error.clear();
      } catch (const PlanningError& e) {
        out.error = e.what();
      }
      out.expansions += stats.expansions;
    };
    if (view.unpublished.empty()) {
      attempt(view.published);
    } else {
      ObstacleSet all = view.published;
      all.insert(all.end(), view.unpublished.begin(), view.unpublished.end());
      attempt(all);
      // An agent still standing on this one's route or goal must not veto the
      // plan; fall back to the published picture only.
      if (!out.path) attempt(view.published);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
  }

  void commit(std::size_t agent, PlanOutcome outcome, int t) {
    result_.replans.push_back({t, agent, outcome.seconds, outcome.expansions, outcome.error});
    result_.agents[agent].plan_seconds.push_back(outcome.seconds);
    if (outcome.path) {
      paths_[agent] = std::move(*outcome.path);
    } else {
      ++result_.agents[agent].plan_failures;
      TimedPath tail = paths_[agent].tail_from(t);
      if (tail.empty()) tail.steps.push_back({state_.poses[agent], t});
      paths_[agent] = std::move(tail);
    }
    board_.publish(agents_[agent].id, paths_[agent], t);
  }

  void replan_all(int t) {
    if (config_.ordering == Ordering::Sequential) {
      for (std::size_t i = 0; i < agents_.size(); ++i) {
        commit(i, plan_agent(i, view_for(i, board_.snapshot(), t), t), t);
      }
      return;
    }
    // Every agent reads the board before anyone publishes.
    std::vector<View> views;
    const PathBlackboard::Snapshot snapshot = board_.snapshot();
    for (std::size_t i = 0; i < agents_.size(); ++i) views.push_back(view_for(i, snapshot, t));
    std::vector<PlanOutcome> outcomes(agents_.size());
    if (config_.parallel_planning) {
      std::vector<std::future<PlanOutcome>> futures;
      for (std::size_t i = 0; i < agents_.size(); ++i) {
        futures.push_back(std::async(std::launch::async, [this, i, t, &views] { return plan_agent(i, views[i], t); }));
      }
      for (std::size_t i = 0; i < agents_.size(); ++i) outcomes[i] = futures[i].get();
    } else {
      for (std::size_t i = 0; i < agents_.size(); ++i) outcomes[i] = plan_agent(i, views[i], t);
    }
    for (std::size_t i = 0; i < agents_.size(); ++i) commit(i, std::move(outcomes[i]), t);
  }

  void update_status(int t) {
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      const GridIndex here = state_.poses[i];
      if (here == agents_[i].goal && (paths_[i].empty() || paths_[i].end_time() <= t)) {
        state_.status[i] = AgentStatus::Arrived;
      } else if (!paths_[i].empty() && paths_[i].cell_at(t + 1) == here) {
        state_.status[i] = AgentStatus::Waiting;
      } else {
        state_.status[i] = AgentStatus::Moving;
      }
    }
  }

  bool finished(int) const {
    for (auto s : state_.status) {
      if (s != AgentStatus::Arrived) return false;
    }
    return true;
  }

  void finalize() {
    result_.state = state_;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      AgentOutcome& out = result_.agents[i];
      const Trajectory& tr = state_.executed[i];
      out.id = agents_[i].id;
      out.path_length = polyline_length(tr) * map_.resolution();
      if (state_.status[i] == AgentStatus::Arrived) {
        out.status = AgentStatus::Arrived;
        int k = static_cast<int>(tr.size()) - 1;
        while (k > 0 && tr[static_cast<std::size_t>(k - 1)] == agents_[i].goal) --k;
        out.arrival = k;
      } else {
        out.status = AgentStatus::Failed;
        result_.state.status[i] = AgentStatus::Failed;
      }
    }
    result_.conflicts = validate(state_.executed);
  }

  const GridMap& map_;
  const StaticRiskField& field_;
  const std::vector<AgentSpec>& agents_;
  const ObstacleSet& scripted_;
  const SimulationConfig& config_;
  std::map<std::string, Footprint> footprints_;
  PathBlackboard board_;
  std::vector<TimedPath> paths_;
  SimState state_;
  SimResult result_;
};

}  // namespace

std::string_view to_string(AgentStatus status) noexcept {
  switch (status) {
    case AgentStatus::Planning: return "planning";
    case AgentStatus::Moving: return "moving";
    case AgentStatus::Waiting: return "waiting";
    case AgentStatus::Arrived: return "arrived";
    case AgentStatus::Failed: return "failed";
  }
  return "unknown";
}

std::string_view to_string(Ordering ordering) noexcept {
  return ordering == Ordering::Sequential ? "sequential" : "concurrent";
}

void validate_setup(const GridMap& map, const std::vector<AgentSpec>& agents, const SimulationConfig& config) {
  if (config.horizon <= 0) throw std::invalid_argument("horizon must be positive");
  if (config.replan_interval < 1) throw std::invalid_argument("replan_interval must be >= 1");
  config.planner.validate();
  std::set<std::string> ids;
  std::set<GridIndex> starts;
  for (const auto& a : agents) {
    if (!ids.insert(a.id).second) throw std::invalid_argument("duplicate agent id '" + a.id + "'");
    for (GridIndex v : {a.start, a.goal}) {
      if (!map.in_bounds(v)) throw std::invalid_argument("agent '" + a.id + "' endpoint " + cell_text(v) + " is out of bounds");
      if (map.is_occupied(v)) throw std::invalid_argument("agent '" + a.id + "' endpoint " + cell_text(v) + " is occupied");
    }
    if (!starts.insert(a.start).second) throw std::invalid_argument("duplicate start " + cell_text(a.start));
    if (a.footprint.major < 0.0 || a.footprint.minor < 0.0 ||
        (a.footprint.major > 0.0 && a.footprint.minor > a.footprint.major)) {
      throw std::invalid_argument("agent '" + a.id + "' footprint must satisfy major >= minor > 0");
    }
  }
}

SimResult run_simulation(const GridMap& map, const StaticRiskField& field, const std::vector<AgentSpec>& agents,
                         const ObstacleSet& scripted, const SimulationConfig& config) {
  validate_setup(map, agents, config);
  validate_obstacles(scripted);
  return Simulation(map, field, agents, scripted, config).run();
}

}  // namespace aspt::coordination
