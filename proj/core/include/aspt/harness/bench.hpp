#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aspt/harness/report.hpp"
#include "aspt/harness/scenario.hpp"

namespace aspt::harness {

inline constexpr const char* kFailureMarker = "NA";

struct BenchRow {
  std::string scenario;
  PlannerKind planner = PlannerKind::Aspt;
  int rep = 0;
  bool ok = false;
  double plan_time = 0.0;          ///< seconds
  double total_path_length = 0.0;  ///< meters
  std::size_t successes = 0;
  std::size_t conflicts = 0;       ///< vertex/edge/swap records
  std::string error;
};

/// One row per (scenario, planner, repetition). A failing planner yields a
/// row marked failed and the bench continues.
std::vector<BenchRow> run_bench(const std::vector<Scenario>& scenarios, const std::vector<PlannerKind>& planners,
                                int repetitions, const std::function<void(const BenchRow&)>& on_row = {});

/// Header: scenario,planner,rep,plan_time_s,total_path_length_m,successes,conflicts,status.
/// Numeric columns of failed rows hold kFailureMarker.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace aspt::harness
