#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aspt/harness/bench.hpp"
#include "aspt/harness/random_scenario.hpp"
#include "aspt/harness/render.hpp"
#include "aspt/harness/report.hpp"
#include "aspt/harness/scenario.hpp"
#include "aspt/risk_field.hpp"

namespace {

using namespace aspt;
using namespace aspt::harness;

struct CommonFlags {
  std::optional<int> connectivity;
  std::optional<double> roi;
  std::optional<double> roi_crit;
  std::optional<double> omega;
  std::optional<int> replan_interval;
  std::optional<int> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> ordering;
  bool random = false;

  void attach(CLI::App* app) {
    app->add_option("--connectivity", connectivity, "Grid connectivity (4 or 8)")->check(CLI::IsMember({4, 8}));
    app->add_option("--roi", roi, "Risk region of interest, cells")->check(CLI::PositiveNumber);
    app->add_option("--roi-crit", roi_crit, "Critical risk band, cells")->check(CLI::NonNegativeNumber);
    app->add_option("--omega", omega, "ECBS suboptimality factor")->check(CLI::Range(1.0, 100.0));
    app->add_option("--replan-interval", replan_interval, "Ticks between replans")->check(CLI::PositiveNumber);
    app->add_option("--horizon", horizon, "Simulation horizon, ticks")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Scenario seed (selects the generated scenario with --random)");
    app->add_option("--ordering", ordering, "Replanning order")->check(CLI::IsMember({"sequential", "concurrent"}));
    app->add_flag("--random", random, "Use a generated 40x40 scenario instead of a file");
  }

  Overrides overrides() const {
    Overrides o;
    if (connectivity) o.connectivity = *connectivity == 4 ? Connectivity::Four : Connectivity::Eight;
    o.roi = roi;
    o.roi_crit = roi_crit;
    o.omega = omega;
    o.replan_interval = replan_interval;
    o.horizon = horizon;
    o.seed = seed;
    if (ordering) {
      o.ordering = *ordering == "concurrent" ? coordination::Ordering::Concurrent : coordination::Ordering::Sequential;
    }
    return o;
  }

  Scenario load(const std::string& path) const {
    Scenario s = random ? random_scenario(seed.value_or(0)) : load_scenario(path);
    apply_overrides(s, overrides());
    return s;
  }
};

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

void print_summary(const SimReport& r) {
  std::cout << "scenario " << r.scenario << "  planner " << to_string(r.planner) << "  ticks " << r.ticks << '\n';
  for (const auto& a : r.agents) {
    std::cout << "  " << a.id << ": " << (a.success ? "arrived" : "failed");
    if (a.arrival) std::cout << " at t=" << *a.arrival;
    std::cout << ", length " << a.path_length << " m";
    if (!a.error.empty()) std::cout << " (" << a.error << ")";
    std::cout << '\n';
  }
  std::cout << "  total path length " << r.total_path_length << " m, plan time total " << r.total_plan_time
            << " s (max " << r.max_plan_time << " s)\n";
  std::cout << "  conflicts " << r.conflicts.size();
  for (const auto& c : r.conflicts) std::cout << "\n    " << to_string(c.kind) << " at t=" << c.time;
  std::cout << '\n';
  if (!r.error.empty()) std::cout << "  planner error: " << r.error << '\n';
}

std::vector<PlannerKind> parse_planners(const std::string& list) {
  std::vector<PlannerKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(planner_from_string(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-aware multi-agent grid planning: simulate, benchmark and render scenarios."};
  app.require_subcommand(1);

  // run
  CommonFlags run_flags;
  std::string run_scenario;
  std::string run_planner_name = "aspt";
  std::string run_csv;
  std::string run_json;
  std::string run_svg_dir;
  auto* run = app.add_subcommand("run", "Plan or simulate one scenario and write a report");
  run->add_option("scenario", run_scenario, "Scenario YAML file");
  run->add_option("-p,--planner", run_planner_name, "aspt, cbs, ecbs or sipp")
      ->check(CLI::IsMember({"aspt", "cbs", "ecbs", "sipp"}));
  run->add_option("--csv", run_csv, "Per-agent CSV report path");
  run->add_option("--json", run_json, "JSON report path");
  run->add_option("--svg-dir", run_svg_dir, "Directory for one SVG frame per tick");
  run_flags.attach(run);

  // bench
  CommonFlags bench_flags;
  std::vector<std::string> bench_scenarios;
  std::string bench_planners = "aspt,cbs,ecbs,sipp";
  int bench_reps = 3;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Benchmark planners over scenarios");
  bench->add_option("scenarios", bench_scenarios, "Scenario YAML files");
  bench->add_option("--planners", bench_planners, "Comma separated planner list");
  bench->add_option("--reps", bench_reps, "Repetitions per (scenario, planner)")->check(CLI::PositiveNumber);
  bench->add_option("-o,--out", bench_out, "CSV output path (default stdout)");
  bench_flags.attach(bench);

  // render
  CommonFlags render_flags;
  std::string render_scenario;
  std::string render_planner_name = "aspt";
  int render_tick = 0;
  std::string render_out = "scenario.svg";
  auto* render = app.add_subcommand("render", "Render a scenario and its planned trajectories as SVG");
  render->add_option("scenario", render_scenario, "Scenario YAML file");
  render->add_option("-p,--planner", render_planner_name, "aspt, cbs, ecbs or sipp")
      ->check(CLI::IsMember({"aspt", "cbs", "ecbs", "sipp"}));
  render->add_option("--tick", render_tick, "Tick to draw obstacles and agents at")->check(CLI::NonNegativeNumber);
  render->add_option("-o,--out", render_out, "SVG output path");
  render_flags.attach(render);

  // riskmap
  std::string risk_input;
  std::string risk_out = "risk.pgm";
  double risk_roi = RiskConfig{}.roi;
  double risk_roi_crit = RiskConfig{}.roi_crit;
  auto* riskmap = app.add_subcommand("riskmap", "Export the static risk field as a PGM image");
  riskmap->add_option("input", risk_input, "Scenario YAML, map YAML or ASCII map")->required();
  riskmap->add_option("-o,--out", risk_out, "PGM output path");
  riskmap->add_option("--roi", risk_roi, "Risk region of interest, cells")->check(CLI::PositiveNumber);
  riskmap->add_option("--roi-crit", risk_roi_crit, "Critical risk band, cells")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (run_scenario.empty() && !run_flags.random) throw CLI::RequiredError("scenario");
      const Scenario s = run_flags.load(run_scenario);
      const SimReport report = run_planner(s, planner_from_string(run_planner_name));
      print_summary(report);
      if (!run_csv.empty()) write_file(run_csv, to_csv(report));
      if (!run_json.empty()) write_file(run_json, to_json(report));
      if (!run_svg_dir.empty()) {
        const StaticRiskField field = build_static_field(s.map, s.simulation.planner.risk);
        for (int t = 0; t <= report.ticks; ++t) {
          std::ostringstream name;
          name << "frame_" << std::setw(4) << std::setfill('0') << t << ".svg";
          write_file((std::filesystem::path(run_svg_dir) / name.str()).string(),
                     render_svg(s, field, report.trajectories, t));
        }
      }
    } else if (*bench) {
      std::vector<Scenario> scenarios;
      if (bench_flags.random) scenarios.push_back(bench_flags.load(""));
      for (const auto& path : bench_scenarios) scenarios.push_back(bench_flags.load(path));
      if (scenarios.empty()) throw CLI::RequiredError("scenarios");
      const auto rows = run_bench(scenarios, parse_planners(bench_planners), bench_reps, [](const BenchRow& r) {
        std::cerr << r.scenario << ' ' << to_string(r.planner) << " rep " << r.rep << ": "
                  << (r.ok ? "ok" : "failed") << '\n';
      });
      const std::string csv = bench_csv(rows);
      if (bench_out.empty()) {
        std::cout << csv;
      } else {
        write_file(bench_out, csv);
      }
    } else if (*render) {
      if (render_scenario.empty() && !render_flags.random) throw CLI::RequiredError("scenario");
      const Scenario s = render_flags.load(render_scenario);
      const SimReport report = run_planner(s, planner_from_string(render_planner_name));
      const StaticRiskField field = build_static_field(s.map, s.simulation.planner.risk);
      write_file(render_out, render_svg(s, field, report.trajectories, render_tick));
    } else if (*riskmap) {
      RiskConfig cfg;
      cfg.roi = risk_roi;
      cfg.roi_crit = risk_roi_crit;
      const std::string ext = std::filesystem::path(risk_input).extension().string();
      GridMap map;
      if (ext == ".yaml" || ext == ".yml") {
        // a scenario carries schema_version; anything else is a map-server file
        std::ifstream in(risk_input);
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        map = text.find("schema_version") != std::string::npos ? load_scenario(risk_input).map
                                                               : load_map_yaml_file(risk_input);
      } else {
        map = load_map_file(risk_input);
      }
      write_file(risk_out, export_risk_pgm(build_static_field(map, cfg)));
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "aspt: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
