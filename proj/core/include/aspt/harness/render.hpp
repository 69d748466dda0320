#pragma once

#include <string>
#include <vector>

#include "aspt/coordination/validator.hpp"
#include "aspt/harness/scenario.hpp"
#include "aspt/risk_field.hpp"

namespace aspt::harness {

struct RenderOptions {
  double cell_px = 12.0;
};

/// SVG 1.1 document: static risk as grayscale cells, obstacles as ellipses at
/// their predicted pose for `tick`, each trajectory as a polyline with the agent
/// position at `tick`, and start/goal markers. Output bytes depend only on the inputs.
std::string render_svg(const Scenario& scenario, const StaticRiskField& field,
                       const std::vector<coordination::Trajectory>& trajectories, int tick,
                       const RenderOptions& options = {});

}  // namespace aspt::harness
