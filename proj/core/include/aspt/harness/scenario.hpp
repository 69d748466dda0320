#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aspt/coordination/simulation.hpp"
#include "aspt/dynamics.hpp"
#include "aspt/grid_map.hpp"

namespace aspt::harness {

inline constexpr int kSchemaVersion = 1;

/// Scenario parse or validation failure; the message starts with the location.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BaselineSettings {
  double inflation = 0.0;  ///< meters
  double omega = 2.0;
  int horizon = 256;
  std::size_t node_budget = 100000;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name;
  std::string map_source;  ///< file path or "inline"
  GridMap map;
  std::vector<coordination::AgentSpec> agents;
  ObstacleSet obstacles;
  coordination::SimulationConfig simulation;  ///< includes the planner configuration
  BaselineSettings baseline;
  std::uint64_t seed = 0;
};

/// Parse a YAML scenario document. Relative map paths resolve against `base_dir`.
Scenario parse_scenario(const std::string& text, const std::string& base_dir = ".");

/// Read and parse a scenario file; errors name the path.
Scenario load_scenario(const std::string& path);

/// Check bounds, free endpoints, unique ids across agents and obstacles, and configs.
void validate_scenario(const Scenario& scenario);

/// Serialize back to the YAML schema, map inlined as ASCII.
std::string to_yaml(const Scenario& scenario);

struct Overrides {
  std::optional<Connectivity> connectivity;
  std::optional<double> roi;
  std::optional<double> roi_crit;
  std::optional<double> omega;
  std::optional<int> replan_interval;
  std::optional<int> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<coordination::Ordering> ordering;
};

void apply_overrides(Scenario& scenario, const Overrides& overrides);

}  // namespace aspt::harness
