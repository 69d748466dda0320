#include "aspt/baselines/cbs.hpp"

#include <memory>
#include <tuple>

#include "aspt/planner.hpp"
#include "focal_queue.hpp"

namespace aspt::baselines {
namespace {

std::vector<Constraint> constraints_for(const Conflict& conflict) {
  const std::size_t a = conflict.agents.at(0);
  const std::size_t b = conflict.agents.at(1);
  if (conflict.kind == ConflictKind::Vertex) {
    const GridIndex c = conflict.cells.at(0);
    return {{a, ConstraintKind::Vertex, c, c, conflict.time}, {b, ConstraintKind::Vertex, c, c, conflict.time}};
  }
  const GridIndex from = conflict.cells.at(0);
  const GridIndex to = conflict.cells.at(1);
  return {{a, ConstraintKind::Edge, from, to, conflict.time + 1},
          {b, ConstraintKind::Edge, to, from, conflict.time + 1}};
}

class ConflictTreeSearch {
 public:
  ConflictTreeSearch(const std::vector<Agent>& agents, const GridMap& map, double omega, bool focal,
                     const BaselineConfig& config)
      : agents_(agents), map_(map), omega_(omega), focal_(focal), config_(config), queue_(omega) {}

  MultiAgentResult run() {
    auto root = std::make_unique<ConflictTreeNode>();
    root->solution.resize(agents_.size());
    root->lower_bounds.resize(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      try {
        replan(*root, i);
      } catch (const NoPathError& e) {
        throw NoSolution("agent '" + agents_[i].id + "' has no path: " + e.what());
      }
    }
    push(std::move(root));

    while (!queue_.empty()) {
      const std::size_t id = queue_.pop();
      std::unique_ptr<ConflictTreeNode> node = std::move(nodes_[id]);
      ++result_.nodes_expanded;
      const auto conflict = detect_first_conflict(node->solution);
      if (!conflict) {
        result_.paths = std::move(node->solution);
        result_.cost = node->cost;
        result_.lower_bound = node->lower_bound;
        return result_;
      }
      for (const Constraint& c : constraints_for(*conflict)) {
        auto child = std::make_unique<ConflictTreeNode>(*node);
        child->constraints.push_back(c);
        try {
          replan(*child, c.agent);
        } catch (const NoPathError&) {
          continue;
        }
        push(std::move(child));
      }
    }
    throw NoSolution("constraint tree exhausted after " + std::to_string(result_.nodes_expanded) + " expansions");
  }

 private:
  void replan(ConflictTreeNode& node, std::size_t agent) {
    const Agent& a = agents_[agent];
    ReservationTable soft;
    if (focal_) {
      for (std::size_t j = 0; j < node.solution.size(); ++j) {
        if (j != agent) soft.add(node.solution[j]);
      }
    }
    LowLevelResult r = focal_space_time_search(a.start, a.goal, map_, ConstraintTable(node.constraints, agent),
                                               ReservationTable{}, soft, focal_ ? omega_ : 1.0, config_);
    result_.low_level_expansions += r.expansions;
    node.solution[agent] = std::move(r.path);
    node.lower_bounds[agent] = focal_ ? r.lower_bound : r.cost;
    node.cost = sum_of_costs(node.solution);
    node.lower_bound = 0.0;
    for (double lb : node.lower_bounds) node.lower_bound += lb;
    node.conflicts = focal_ ? count_conflicts(node.solution) : 0;
  }

  void push(std::unique_ptr<ConflictTreeNode> node) {
    if (++result_.nodes_generated > config_.node_budget) {
      throw BudgetExceeded("constraint tree exceeded " + std::to_string(config_.node_budget) + " nodes");
    }
    const std::size_t id = nodes_.size();
    const double lb = focal_ ? node->lower_bound : node->cost;
    queue_.push(id, lb, node->cost, id, {node->conflicts, node->cost, id});
    nodes_.push_back(std::move(node));
  }

  const std::vector<Agent>& agents_;
  const GridMap& map_;
  double omega_;
  bool focal_;
  const BaselineConfig& config_;
  detail::FocalQueue<std::size_t, std::tuple<int, double, std::size_t>> queue_;
  std::vector<std::unique_ptr<ConflictTreeNode>> nodes_;
  MultiAgentResult result_;
};

}  // namespace

MultiAgentResult cbs_plan(const std::vector<Agent>& agents, const GridMap& map, const BaselineConfig& config) {
  config.validate();
  validate_agents(map, agents);
  return ConflictTreeSearch(agents, map, 1.0, false, config).run();
}

MultiAgentResult ecbs_plan(const std::vector<Agent>& agents, const GridMap& map, double omega,
                           const BaselineConfig& config) {
  if (!(omega >= 1.0)) throw std::invalid_argument("omega must be >= 1");
  config.validate();
  validate_agents(map, agents);
  return ConflictTreeSearch(agents, map, omega, true, config).run();
}

}  // namespace aspt::baselines
