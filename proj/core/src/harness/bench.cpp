#include "aspt/harness/bench.hpp"

#include <sstream>

#include "aspt/coordination/validator.hpp"

namespace aspt::harness {
namespace {

std::string number(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<Scenario>& scenarios, const std::vector<PlannerKind>& planners,
                                int repetitions, const std::function<void(const BenchRow&)>& on_row) {
  std::vector<BenchRow> rows;
  for (const auto& scenario : scenarios) {
    for (PlannerKind planner : planners) {
      for (int rep = 0; rep < repetitions; ++rep) {
        const SimReport report = run_planner(scenario, planner);
        BenchRow row;
        row.scenario = scenario.name;
        row.planner = planner;
        row.rep = rep;
        row.ok = report.error.empty() && report.successes() == scenario.agents.size();
        row.plan_time = report.total_plan_time;
        row.total_path_length = report.total_path_length;
        row.successes = report.successes();
        row.conflicts = coordination::count_collisions(report.conflicts);
        row.error = report.error;
        if (on_row) on_row(row);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "scenario,planner,rep,plan_time_s,total_path_length_m,successes,conflicts,status\r\n";
  for (const auto& r : rows) {
    os << csv_field(r.scenario) << ',' << to_string(r.planner) << ',' << r.rep << ',';
    if (r.ok) {
      os << number(r.plan_time) << ',' << number(r.total_path_length) << ',';
    } else {
      os << kFailureMarker << ',' << kFailureMarker << ',';
    }
    os << r.successes << ',' << r.conflicts << ',' << (r.ok ? "ok" : "failed") << "\r\n";
  }
  return os.str();
}

}  // namespace aspt::harness
