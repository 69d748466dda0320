#pragma once

#include <cstdint>

#include "aspt/harness/scenario.hpp"

namespace aspt::harness {

struct RandomScenarioOptions {
  int width = 40;
  int height = 40;
  int min_agents = 3;
  int max_agents = 4;
  double obstacle_fill = 0.12;  ///< fraction of cells covered by rectangular blocks
  int min_separation = 3;       ///< Chebyshev distance between any two starts / goals
  double resolution = 1.0;
};

/// Reproducible random scenario: block obstacles and agents with well separated
/// starts and goals inside one connected free region, clear of the critical band.
Scenario random_scenario(std::uint64_t seed, const RandomScenarioOptions& options = {});

}  // namespace aspt::harness
