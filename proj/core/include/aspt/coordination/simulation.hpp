#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aspt/conflict.hpp"
#include "aspt/coordination/blackboard.hpp"
#include "aspt/coordination/validator.hpp"
#include "aspt/dynamics.hpp"
#include "aspt/planner.hpp"
#include "aspt/risk_field.hpp"

namespace aspt::coordination {

enum class Ordering { Sequential, Concurrent };
enum class AgentStatus { Planning, Moving, Waiting, Arrived, Failed };

std::string_view to_string(AgentStatus status) noexcept;
std::string_view to_string(Ordering ordering) noexcept;

struct AgentSpec {
  std::string id;
  GridIndex start;
  GridIndex goal;
  Footprint footprint;
};

struct SimulationConfig {
  Ordering ordering = Ordering::Sequential;
  int replan_interval = 5;  ///< ticks
  int horizon = 200;        ///< ticks
  bool parallel_planning = true;  ///< concurrent ordering plans on worker threads
  PlannerConfig planner;
};

struct ReplanRecord {
  int tick = 0;
  std::size_t agent = 0;
  double seconds = 0.0;
  std::size_t expansions = 0;
  std::string error;  ///< empty on success
};

struct SimState {
  int clock = 0;
  std::vector<GridIndex> poses;
  std::vector<AgentStatus> status;
  std::vector<Trajectory> executed;
};

struct AgentOutcome {
  std::string id;
  AgentStatus status = AgentStatus::Failed;
  std::optional<int> arrival;  ///< first tick from which the agent stays at its goal
  double path_length = 0.0;    ///< meters
  std::vector<double> plan_seconds;
  int plan_failures = 0;
};

struct SimResult {
  SimState state;
  std::vector<AgentOutcome> agents;
  std::vector<ReplanRecord> replans;
  std::vector<Conflict> conflicts;
};

/// Throws std::invalid_argument on duplicate ids or starts, occupied or
/// out-of-bounds endpoints, or a non-positive horizon / replan interval.
void validate_setup(const GridMap& map, const std::vector<AgentSpec>& agents, const SimulationConfig& config);

/// Discrete-time path-sharing simulation. Agents replan with the risk-aware
/// planner at t = 0 and every replan_interval ticks, publish to a blackboard and
/// see each other's published paths as dynamic obstacles. `scripted` obstacles
/// are given at t = 0.
SimResult run_simulation(const GridMap& map, const StaticRiskField& field, const std::vector<AgentSpec>& agents,
                         const ObstacleSet& scripted, const SimulationConfig& config);

}  // namespace aspt::coordination
