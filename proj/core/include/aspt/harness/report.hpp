#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aspt/conflict.hpp"
#include "aspt/coordination/validator.hpp"
#include "aspt/harness/scenario.hpp"

namespace aspt::harness {

enum class PlannerKind { Aspt, Cbs, Ecbs, Sipp };

std::string_view to_string(PlannerKind kind) noexcept;
/// Throws std::invalid_argument on an unknown name.
PlannerKind planner_from_string(std::string_view name);

struct AgentReport {
  std::string id;
  bool success = false;
  std::optional<int> arrival;
  double path_length = 0.0;  ///< meters
  std::vector<double> plan_seconds;
  std::string error;
};

struct SimReport {
  std::string scenario;
  PlannerKind planner = PlannerKind::Aspt;
  std::vector<AgentReport> agents;
  std::vector<coordination::Trajectory> trajectories;
  std::vector<Conflict> conflicts;
  double total_path_length = 0.0;  ///< meters, sum over agents
  double total_plan_time = 0.0;    ///< seconds
  double max_plan_time = 0.0;
  double mean_plan_time = 0.0;
  double cost = 0.0;  ///< baseline sum of costs; 0 for the simulation
  int ticks = 0;
  std::string error;  ///< planner-level failure, if any

  std::size_t successes() const;
};

/// Run one planner on the scenario. Baselines plan once, open loop, on the map
/// inflated by the scenario's safety distance; aspt runs the coordination loop.
/// Planner failures are recorded in the report, never thrown.
SimReport run_planner(const Scenario& scenario, PlannerKind kind);

/// Per-agent rows: scenario, planner, agent, success, arrival, path_length_m,
/// plan_time_max_s, plan_time_mean_s, replans, error.
std::string to_csv(const SimReport& report);

/// Structured JSON document with per-agent results, totals, conflicts and trajectories.
std::string to_json(const SimReport& report);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& value);

}  // namespace aspt::harness
