#include "aspt/harness/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>

#include <yaml-cpp/yaml.h>

namespace aspt::harness {
namespace {

std::string at_line(const std::string& ctx, const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  if (mark.line < 0) return ctx;
  return ctx + " (line " + std::to_string(mark.line + 1) + ")";
}

template <typename T>
T read(const YAML::Node& parent, const char* key, const std::string& ctx, T fallback) {
  const YAML::Node node = parent[key];
  if (!node) return fallback;
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ScenarioError(at_line(ctx + "." + key, node) + ": invalid value");
  }
}

template <typename T>
T require(const YAML::Node& parent, const char* key, const std::string& ctx) {
  const YAML::Node node = parent[key];
  if (!node) throw ScenarioError(at_line(ctx, parent) + ": missing key '" + key + "'");
  return read<T>(parent, key, ctx, T{});
}

std::vector<double> numbers(const YAML::Node& node, const std::string& ctx, std::size_t min_size, std::size_t max_size) {
  if (!node.IsSequence() || node.size() < min_size || node.size() > max_size) {
    throw ScenarioError(at_line(ctx, node) + ": expected a list of " + std::to_string(min_size) +
                        (min_size == max_size ? "" : "-" + std::to_string(max_size)) + " numbers");
  }
  std::vector<double> out;
  for (const auto& v : node) {
    try {
      out.push_back(v.as<double>());
    } catch (const YAML::Exception&) {
      throw ScenarioError(at_line(ctx, v) + ": expected a number");
    }
  }
  return out;
}

GridIndex cell(const YAML::Node& node, const std::string& ctx) {
  const auto v = numbers(node, ctx, 2, 2);
  if (v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) {
    throw ScenarioError(at_line(ctx, node) + ": cell coordinates must be integers");
  }
  return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  return p.lexically_normal().string();
}

GridMap parse_map(const YAML::Node& node, const std::string& base_dir, std::string& source) {
  if (!node || !node.IsMap()) throw ScenarioError(at_line("map", node) + ": expected a mapping");
  try {
    if (node["ascii"]) {
      source = "inline";
      return load_ascii(node["ascii"].as<std::string>());
    }
    if (node["ascii_file"]) {
      source = resolve(base_dir, node["ascii_file"].as<std::string>());
      return load_map_file(source);
    }
    if (node["yaml"]) {
      source = resolve(base_dir, node["yaml"].as<std::string>());
      return load_map_yaml_file(source);
    }
  } catch (const MapLoadError& e) {
    throw ScenarioError(at_line("map", node) + ": " + e.what());
  }
  throw ScenarioError(at_line("map", node) + ": expected one of 'ascii', 'ascii_file', 'yaml'");
}

Connectivity parse_connectivity(int value, const std::string& ctx) {
  if (value == 4) return Connectivity::Four;
  if (value == 8) return Connectivity::Eight;
  throw ScenarioError(ctx + ": connectivity must be 4 or 8");
}

void parse_planner(const YAML::Node& node, PlannerConfig& p) {
  if (!node) return;
  const std::string ctx = "planner";
  p.connectivity = parse_connectivity(read<int>(node, "connectivity", ctx, static_cast<int>(p.connectivity)), ctx);
  p.risk.roi = read<double>(node, "roi", ctx, p.risk.roi);
  p.risk.roi_crit = read<double>(node, "roi_crit", ctx, p.risk.roi_crit);
  p.risk.unknown_risk = read<double>(node, "unknown_risk", ctx, p.risk.unknown_risk);
  p.risk.cone_angle = read<double>(node, "cone_angle", ctx, p.risk.cone_angle);
  p.time_cost_weight = read<double>(node, "time_cost_weight", ctx, p.time_cost_weight);
  p.wait_cost = read<double>(node, "wait_cost", ctx, p.wait_cost);
  p.static_risk_weight = read<double>(node, "static_risk_weight", ctx, p.static_risk_weight);
  p.dynamic_risk_weight = read<double>(node, "dynamic_risk_weight", ctx, p.dynamic_risk_weight);
  p.watchdog_max_expansions = read<std::size_t>(node, "watchdog_max_expansions", ctx, p.watchdog_max_expansions);
  p.watchdog_max_seconds = read<double>(node, "watchdog_max_seconds", ctx, p.watchdog_max_seconds);
  p.dt = read<double>(node, "dt", ctx, p.dt);
  p.unknown_heuristic_factor = read<double>(node, "unknown_heuristic_factor", ctx, p.unknown_heuristic_factor);
  p.lambda_step = read<double>(node, "lambda_step", ctx, p.lambda_step);
  p.goal_hold_steps = read<int>(node, "goal_hold_steps", ctx, p.goal_hold_steps);
}

coordination::Ordering parse_ordering(const std::string& text, const std::string& ctx) {
  if (text == "sequential") return coordination::Ordering::Sequential;
  if (text == "concurrent") return coordination::Ordering::Concurrent;
  throw ScenarioError(ctx + ": ordering must be 'sequential' or 'concurrent'");
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what());
  }
  if (!root.IsMap()) throw ScenarioError("scenario: expected a mapping at the top level");

  Scenario s;
  s.schema_version = require<int>(root, "schema_version", "scenario");
  if (s.schema_version != kSchemaVersion) {
    throw ScenarioError("schema_version: unsupported version " + std::to_string(s.schema_version));
  }
  s.name = read<std::string>(root, "name", "scenario", "unnamed");
  s.map = parse_map(root["map"], base_dir, s.map_source);

  const YAML::Node agents = root["agents"];
  if (!agents || !agents.IsSequence()) throw ScenarioError(at_line("agents", root) + ": expected a list");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const YAML::Node a = agents[i];
    const std::string ctx = "agents[" + std::to_string(i) + "]";
    coordination::AgentSpec spec;
    spec.id = require<std::string>(a, "id", ctx);
    if (!a["start"]) throw ScenarioError(at_line(ctx, a) + ": missing key 'start'");
    if (!a["goal"]) throw ScenarioError(at_line(ctx, a) + ": missing key 'goal'");
    spec.start = cell(a["start"], ctx + ".start");
    spec.goal = cell(a["goal"], ctx + ".goal");
    if (const YAML::Node f = a["footprint"]) {
      spec.footprint.major = read<double>(f, "major", ctx + ".footprint", 0.0);
      spec.footprint.minor = read<double>(f, "minor", ctx + ".footprint", spec.footprint.major);
      spec.footprint.theta = read<double>(f, "theta", ctx + ".footprint", 0.0);
    }
    s.agents.push_back(spec);
  }

  if (const YAML::Node obstacles = root["obstacles"]) {
    if (!obstacles.IsSequence()) throw ScenarioError(at_line("obstacles", obstacles) + ": expected a list");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      const YAML::Node o = obstacles[i];
      const std::string ctx = "obstacles[" + std::to_string(i) + "]";
      DynamicObstacle obs;
      obs.id = require<std::string>(o, "id", ctx);
      if (o["pose"]) {
        const auto pose = numbers(o["pose"], ctx + ".pose", 2, 3);
        obs.position = {pose[0], pose[1]};
        if (pose.size() == 3) obs.theta = pose[2];
      }
      if (o["axes"]) {
        const auto axes = numbers(o["axes"], ctx + ".axes", 2, 2);
        obs.major = axes[0];
        obs.minor = axes[1];
      }
      obs.theta = read<double>(o, "theta", ctx, obs.theta);
      if (o["velocity"]) {
        const auto v = numbers(o["velocity"], ctx + ".velocity", 2, 2);
        obs.velocity = {v[0], v[1]};
      }
      if (const YAML::Node path = o["path"]) {
        for (std::size_t k = 0; k < path.size(); ++k) {
          const auto p = numbers(path[k], ctx + ".path[" + std::to_string(k) + "]", 2, 2);
          obs.shared_path.push_back({p[0], p[1]});
        }
      }
      if (const YAML::Node path = o["path_cells"]) {
        for (std::size_t k = 0; k < path.size(); ++k) {
          const GridIndex c = cell(path[k], ctx + ".path_cells[" + std::to_string(k) + "]");
          if (!s.map.in_bounds(c)) throw ScenarioError(at_line(ctx + ".path_cells", path[k]) + ": cell out of bounds");
          obs.shared_path.push_back(grid_to_world(s.map, c));
        }
      }
      // repeat: k plays the scripted loop k times in total
      const int repeat = read<int>(o, "repeat", ctx, 1);
      if (repeat < 1) throw ScenarioError(at_line(ctx + ".repeat", o["repeat"]) + ": must be >= 1");
      if (repeat > 1 && obs.has_shared_path()) {
        const std::vector<WorldPoint> loop = obs.shared_path;
        for (int k = 1; k < repeat; ++k) obs.shared_path.insert(obs.shared_path.end(), loop.begin(), loop.end());
      }
      if (!o["pose"] && obs.has_shared_path()) obs.position = obs.shared_path.front();
      s.obstacles.push_back(obs);
    }
  }

  parse_planner(root["planner"], s.simulation.planner);
  if (const YAML::Node b = root["baseline"]) {
    s.baseline.inflation = read<double>(b, "inflation", "baseline", s.baseline.inflation);
    s.baseline.omega = read<double>(b, "omega", "baseline", s.baseline.omega);
    s.baseline.horizon = read<int>(b, "horizon", "baseline", s.baseline.horizon);
    s.baseline.node_budget = read<std::size_t>(b, "node_budget", "baseline", s.baseline.node_budget);
  }
  if (const YAML::Node sim = root["simulation"]) {
    s.simulation.horizon = read<int>(sim, "horizon", "simulation", s.simulation.horizon);
    s.simulation.replan_interval = read<int>(sim, "replan_interval", "simulation", s.simulation.replan_interval);
    s.simulation.ordering =
        parse_ordering(read<std::string>(sim, "ordering", "simulation", "sequential"), "simulation.ordering");
  }
  s.seed = read<std::uint64_t>(root, "seed", "scenario", 0);
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return parse_scenario(text, std::filesystem::path(path).parent_path().string());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path + ": " + e.what());
  }
}

void validate_scenario(const Scenario& s) {
  std::set<std::string> ids;
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    if (!ids.insert(s.agents[i].id).second) {
      throw ScenarioError("agents[" + std::to_string(i) + "]: duplicate id '" + s.agents[i].id + "'");
    }
  }
  for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
    if (!ids.insert(s.obstacles[i].id).second) {
      throw ScenarioError("obstacles[" + std::to_string(i) + "]: duplicate id '" + s.obstacles[i].id + "'");
    }
  }
  try {
    coordination::validate_setup(s.map, s.agents, s.simulation);
    validate_obstacles(s.obstacles);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  std::set<GridIndex> goals;
  for (const auto& a : s.agents) {
    if (!goals.insert(a.goal).second) throw ScenarioError("agents: duplicate goal for '" + a.id + "'");
  }
  if (s.baseline.omega < 1.0) throw ScenarioError("baseline.omega: must be >= 1");
  if (s.baseline.horizon <= 0) throw ScenarioError("baseline.horizon: must be positive");
  if (s.baseline.inflation < 0.0) throw ScenarioError("baseline.inflation: must be non-negative");
}

std::string to_yaml(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << s.schema_version;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "map" << YAML::Value << YAML::BeginMap << YAML::Key << "ascii" << YAML::Value << YAML::Literal
      << to_ascii(s.map) << YAML::EndMap;

  out << YAML::Key << "agents" << YAML::Value << YAML::BeginSeq;
  for (const auto& a : s.agents) {
    out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << a.id;
    out << YAML::Key << "start" << YAML::Value << YAML::Flow << std::vector<int>{a.start.x, a.start.y};
    out << YAML::Key << "goal" << YAML::Value << YAML::Flow << std::vector<int>{a.goal.x, a.goal.y};
    if (a.footprint.major > 0.0) {
      out << YAML::Key << "footprint" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "major"
          << YAML::Value << a.footprint.major << YAML::Key << "minor" << YAML::Value << a.footprint.minor
          << YAML::Key << "theta" << YAML::Value << a.footprint.theta << YAML::EndMap;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  if (!s.obstacles.empty()) {
    out << YAML::Key << "obstacles" << YAML::Value << YAML::BeginSeq;
    for (const auto& o : s.obstacles) {
      out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << o.id;
      out << YAML::Key << "pose" << YAML::Value << YAML::Flow
          << std::vector<double>{o.position.x, o.position.y, o.theta};
      out << YAML::Key << "axes" << YAML::Value << YAML::Flow << std::vector<double>{o.major, o.minor};
      out << YAML::Key << "velocity" << YAML::Value << YAML::Flow
          << std::vector<double>{o.velocity.vx, o.velocity.vy};
      if (o.has_shared_path()) {
        out << YAML::Key << "path" << YAML::Value << YAML::BeginSeq;
        for (const auto& p : o.shared_path) out << YAML::Flow << std::vector<double>{p.x, p.y};
        out << YAML::EndSeq;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }

  const PlannerConfig& p = s.simulation.planner;
  out << YAML::Key << "planner" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "connectivity" << YAML::Value << static_cast<int>(p.connectivity);
  out << YAML::Key << "roi" << YAML::Value << p.risk.roi;
  out << YAML::Key << "roi_crit" << YAML::Value << p.risk.roi_crit;
  out << YAML::Key << "unknown_risk" << YAML::Value << p.risk.unknown_risk;
  out << YAML::Key << "cone_angle" << YAML::Value << p.risk.cone_angle;
  out << YAML::Key << "time_cost_weight" << YAML::Value << p.time_cost_weight;
  out << YAML::Key << "wait_cost" << YAML::Value << p.wait_cost;
  out << YAML::Key << "static_risk_weight" << YAML::Value << p.static_risk_weight;
  out << YAML::Key << "dynamic_risk_weight" << YAML::Value << p.dynamic_risk_weight;
  out << YAML::Key << "watchdog_max_expansions" << YAML::Value << p.watchdog_max_expansions;
  out << YAML::Key << "watchdog_max_seconds" << YAML::Value << p.watchdog_max_seconds;
  out << YAML::Key << "dt" << YAML::Value << p.dt;
  out << YAML::Key << "unknown_heuristic_factor" << YAML::Value << p.unknown_heuristic_factor;
  out << YAML::Key << "lambda_step" << YAML::Value << p.lambda_step;
  out << YAML::Key << "goal_hold_steps" << YAML::Value << p.goal_hold_steps;
  out << YAML::EndMap;

  out << YAML::Key << "baseline" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "inflation" << YAML::Value << s.baseline.inflation;
  out << YAML::Key << "omega" << YAML::Value << s.baseline.omega;
  out << YAML::Key << "horizon" << YAML::Value << s.baseline.horizon;
  out << YAML::Key << "node_budget" << YAML::Value << s.baseline.node_budget;
  out << YAML::EndMap;

  out << YAML::Key << "simulation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "horizon" << YAML::Value << s.simulation.horizon;
  out << YAML::Key << "replan_interval" << YAML::Value << s.simulation.replan_interval;
  out << YAML::Key << "ordering" << YAML::Value << std::string(coordination::to_string(s.simulation.ordering));
  out << YAML::EndMap;

  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void apply_overrides(Scenario& s, const Overrides& o) {
  if (o.connectivity) s.simulation.planner.connectivity = *o.connectivity;
  if (o.roi) s.simulation.planner.risk.roi = *o.roi;
  if (o.roi_crit) s.simulation.planner.risk.roi_crit = *o.roi_crit;
  if (o.omega) s.baseline.omega = *o.omega;
  if (o.replan_interval) s.simulation.replan_interval = *o.replan_interval;
  if (o.horizon) s.simulation.horizon = *o.horizon;
  if (o.seed) s.seed = *o.seed;
  if (o.ordering) s.simulation.ordering = *o.ordering;
  try {
    s.simulation.planner.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("overrides: ") + e.what());
  }
  validate_scenario(s);
}

}  // namespace aspt::harness
