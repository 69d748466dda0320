#include "aspt/harness/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aspt/baselines/cbs.hpp"
#include "aspt/baselines/sipp.hpp"
#include "aspt/coordination/simulation.hpp"

namespace aspt::harness {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void finish_totals(SimReport& r) {
  r.total_path_length = 0.0;
  std::vector<double> times;
  for (const auto& a : r.agents) {
    r.total_path_length += a.path_length;
    times.insert(times.end(), a.plan_seconds.begin(), a.plan_seconds.end());
  }
  if (!times.empty()) {
    r.total_plan_time = 0.0;
    for (double t : times) r.total_plan_time += t;
    r.max_plan_time = *std::max_element(times.begin(), times.end());
    r.mean_plan_time = r.total_plan_time / static_cast<double>(times.size());
  }
}

coordination::Trajectory trajectory_of(const TimedPath& path) {
  coordination::Trajectory out;
  for (int t = 0; t <= path.end_time(); ++t) out.push_back(path.cell_at(t));
  return out;
}

SimReport run_aspt(const Scenario& s) {
  SimReport r;
  const StaticRiskField field = build_static_field(s.map, s.simulation.planner.risk);
  const coordination::SimResult sim = coordination::run_simulation(s.map, field, s.agents, s.obstacles, s.simulation);
  r.trajectories = sim.state.executed;
  r.conflicts = sim.conflicts;
  r.ticks = sim.state.clock;
  for (std::size_t i = 0; i < sim.agents.size(); ++i) {
    const auto& a = sim.agents[i];
    AgentReport ar;
    ar.id = a.id;
    ar.success = a.status == coordination::AgentStatus::Arrived;
    ar.arrival = a.arrival;
    ar.path_length = a.path_length;
    ar.plan_seconds = a.plan_seconds;
    for (const auto& rec : sim.replans) {
      if (rec.agent == i && !rec.error.empty()) ar.error = rec.error;
    }
    if (!ar.success && ar.error.empty()) ar.error = "horizon reached before arrival";
    r.agents.push_back(std::move(ar));
  }
  finish_totals(r);
  return r;
}

SimReport run_baseline(const Scenario& s, PlannerKind kind) {
  SimReport r;
  baselines::BaselineConfig cfg;
  cfg.connectivity = s.simulation.planner.connectivity;
  cfg.inflation = s.baseline.inflation / s.map.resolution();
  cfg.horizon = s.baseline.horizon;
  cfg.node_budget = s.baseline.node_budget;

  std::vector<baselines::Agent> agents;
  for (const auto& a : s.agents) agents.push_back({a.id, a.start, a.goal});
  const GridMap map = baselines::prepare_map(s.map, agents, cfg);

  std::vector<std::optional<TimedPath>> paths(agents.size());
  std::vector<std::string> errors(agents.size());
  const auto started = Clock::now();
  try {
    if (kind == PlannerKind::Sipp) {
      baselines::PrioritizedResult pr = baselines::prioritized_sipp(agents, map, cfg);
      paths = std::move(pr.paths);
      errors = std::move(pr.errors);
    } else {
      const baselines::MultiAgentResult mr = kind == PlannerKind::Cbs
                                                 ? baselines::cbs_plan(agents, map, cfg)
                                                 : baselines::ecbs_plan(agents, map, s.baseline.omega, cfg);
      for (std::size_t i = 0; i < agents.size(); ++i) paths[i] = mr.paths[i];
    }
  } catch (const std::exception& e) {
    r.error = e.what();
    std::fill(errors.begin(), errors.end(), r.error);
  }
  const double elapsed = seconds_since(started);

  for (std::size_t i = 0; i < agents.size(); ++i) {
    AgentReport ar;
    ar.id = agents[i].id;
    coordination::Trajectory tr{agents[i].start};
    if (paths[i]) {
      tr = trajectory_of(*paths[i]);
      r.cost += paths[i]->total_cost;
      ar.success = tr.back() == agents[i].goal;
      int k = static_cast<int>(tr.size()) - 1;
      while (k > 0 && tr[static_cast<std::size_t>(k - 1)] == agents[i].goal) --k;
      ar.arrival = k;
    }
    ar.error = errors[i];
    ar.path_length = polyline_length(tr) * s.map.resolution();
    r.ticks = std::max(r.ticks, static_cast<int>(tr.size()) - 1);
    r.trajectories.push_back(std::move(tr));
    r.agents.push_back(std::move(ar));
  }
  r.conflicts = coordination::validate(r.trajectories);
  finish_totals(r);
  r.total_plan_time = r.max_plan_time = r.mean_plan_time = elapsed;
  return r;
}

std::string number(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

}  // namespace

std::string_view to_string(PlannerKind kind) noexcept {
  switch (kind) {
    case PlannerKind::Aspt: return "aspt";
    case PlannerKind::Cbs: return "cbs";
    case PlannerKind::Ecbs: return "ecbs";
    case PlannerKind::Sipp: return "sipp";
  }
  return "unknown";
}

PlannerKind planner_from_string(std::string_view name) {
  for (PlannerKind k : {PlannerKind::Aspt, PlannerKind::Cbs, PlannerKind::Ecbs, PlannerKind::Sipp}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown planner '" + std::string(name) + "' (expected aspt, cbs, ecbs or sipp)");
}

std::size_t SimReport::successes() const {
  return static_cast<std::size_t>(std::count_if(agents.begin(), agents.end(), [](const auto& a) { return a.success; }));
}

SimReport run_planner(const Scenario& scenario, PlannerKind kind) {
  SimReport r;
  try {
    r = kind == PlannerKind::Aspt ? run_aspt(scenario) : run_baseline(scenario, kind);
  } catch (const std::exception& e) {
    r = SimReport{};
    r.error = e.what();
    for (const auto& a : scenario.agents) r.agents.push_back({a.id, false, std::nullopt, 0.0, {}, e.what()});
  }
  r.scenario = scenario.name;
  r.planner = kind;
  return r;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv(const SimReport& r) {
  std::ostringstream os;
  os << "scenario,planner,agent,success,arrival,path_length_m,plan_time_max_s,plan_time_mean_s,replans,error\r\n";
  for (const auto& a : r.agents) {
    double max_t = 0.0;
    double sum_t = 0.0;
    for (double t : a.plan_seconds) {
      max_t = std::max(max_t, t);
      sum_t += t;
    }
    const double mean_t = a.plan_seconds.empty() ? r.mean_plan_time : sum_t / static_cast<double>(a.plan_seconds.size());
    if (a.plan_seconds.empty()) max_t = r.max_plan_time;
    os << csv_field(r.scenario) << ',' << to_string(r.planner) << ',' << csv_field(a.id) << ','
       << (a.success ? 1 : 0) << ',' << (a.arrival ? std::to_string(*a.arrival) : std::string("NA")) << ','
       << number(a.path_length) << ',' << number(max_t) << ',' << number(mean_t) << ',' << a.plan_seconds.size()
       << ',' << csv_field(a.error) << "\r\n";
  }
  return os.str();
}

std::string to_json(const SimReport& r) {
  using nlohmann::json;
  json doc;
  doc["scenario"] = r.scenario;
  doc["planner"] = std::string(to_string(r.planner));
  doc["ticks"] = r.ticks;
  doc["error"] = r.error;
  doc["totals"] = {{"path_length_m", r.total_path_length},
                   {"plan_time_total_s", r.total_plan_time},
                   {"plan_time_max_s", r.max_plan_time},
                   {"plan_time_mean_s", r.mean_plan_time},
                   {"successes", r.successes()},
                   {"cost", r.cost}};
  json agents = json::array();
  for (std::size_t i = 0; i < r.agents.size(); ++i) {
    const auto& a = r.agents[i];
    json ja = {{"id", a.id},
               {"success", a.success},
               {"arrival", a.arrival ? json(*a.arrival) : json(nullptr)},
               {"path_length_m", a.path_length},
               {"plan_seconds", a.plan_seconds},
               {"error", a.error}};
    json traj = json::array();
    if (i < r.trajectories.size()) {
      for (const auto& c : r.trajectories[i]) traj.push_back({c.x, c.y});
    }
    ja["trajectory"] = traj;
    agents.push_back(ja);
  }
  doc["agents"] = agents;
  json conflicts = json::array();
  for (const auto& c : r.conflicts) {
    json ids = json::array();
    for (std::size_t a : c.agents) ids.push_back(a < r.agents.size() ? json(r.agents[a].id) : json(a));
    json cells = json::array();
    for (const auto& v : c.cells) cells.push_back({v.x, v.y});
    conflicts.push_back({{"kind", std::string(to_string(c.kind))}, {"agents", ids}, {"cells", cells}, {"time", c.time}});
  }
  doc["conflicts"] = conflicts;
  return doc.dump(2) + "\n";
}

}  // namespace aspt::harness
