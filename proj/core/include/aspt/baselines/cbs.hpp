#pragma once

#include <cstddef>
#include <vector>

#include "aspt/baselines/common.hpp"

namespace aspt::baselines {

struct ConflictTreeNode {
  std::vector<Constraint> constraints;
  std::vector<TimedPath> solution;
  std::vector<double> lower_bounds;  ///< per-agent low-level bound (ECBS)
  double cost = 0.0;
  double lower_bound = 0.0;
  int conflicts = 0;
};

struct MultiAgentResult {
  std::vector<TimedPath> paths;
  double cost = 0.0;
  double lower_bound = 0.0;
  std::size_t nodes_expanded = 0;
  std::size_t nodes_generated = 0;
  std::size_t low_level_expansions = 0;
};

/// Optimal sum-of-costs conflict-based search on `map` (inflate first with prepare_map()).
/// Throws NoSolution when the tree is exhausted and BudgetExceeded past config.node_budget.
MultiAgentResult cbs_plan(const std::vector<Agent>& agents, const GridMap& map, const BaselineConfig& config);

/// Focal-search CBS with suboptimality factor omega >= 1.
MultiAgentResult ecbs_plan(const std::vector<Agent>& agents, const GridMap& map, double omega,
                           const BaselineConfig& config);

}  // namespace aspt::baselines
