#include "aspt/harness/render.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace aspt::harness {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << (std::abs(v) < 5e-4 ? 0.0 : v);
  return os.str();
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

int gray_level(double risk) {
  if (std::isinf(risk)) return 0;
  return static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(risk, 0.0, 100.0) / 100.0)));
}

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

}  // namespace

std::string render_svg(const Scenario& s, const StaticRiskField& field,
                       const std::vector<coordination::Trajectory>& trajectories, int tick,
                       const RenderOptions& options) {
  const GridMap& map = s.map;
  const double px = options.cell_px;
  const double scale = px / map.resolution();
  auto sx = [&](double wx) { return (wx - map.origin().x) * scale; };
  auto sy = [&](double wy) { return (wy - map.origin().y) * scale; };
  auto cx = [&](GridIndex v) { return (v.x + 0.5) * px; };
  auto cy = [&](GridIndex v) { return (v.y + 0.5) * px; };

  std::ostringstream os;
  const double w = map.width() * px;
  const double h = map.height() * px;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
     << "\" viewBox=\"0 0 " << fmt(w) << ' ' << fmt(h) << "\">\n";
  os << "<title>" << xml_escape(s.name) << " t=" << tick << "</title>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h) << "\" fill=\"#ffffff\"/>\n";

  os << "<g id=\"risk\" shape-rendering=\"crispEdges\">\n";
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const int g = gray_level(field.combined({x, y}));
      if (g == 255) continue;
      os << "<rect x=\"" << fmt(x * px) << "\" y=\"" << fmt(y * px) << "\" width=\"" << fmt(px) << "\" height=\""
         << fmt(px) << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
    }
  }
  os << "</g>\n";

  os << "<g id=\"obstacles\">\n";
  for (const auto& o : s.obstacles) {
    const PredictedPose pose = predict_pose(o, std::max(0, tick), s.simulation.planner.dt);
    const double deg = pose.theta * 180.0 / std::numbers::pi;
    os << "<ellipse cx=\"" << fmt(sx(pose.x)) << "\" cy=\"" << fmt(sy(pose.y)) << "\" rx=\"" << fmt(o.major * scale)
       << "\" ry=\"" << fmt(o.minor * scale) << "\" transform=\"rotate(" << fmt(deg) << ' ' << fmt(sx(pose.x)) << ' '
       << fmt(sy(pose.y)) << ")\" fill=\"#ff9896\" fill-opacity=\"0.6\" stroke=\"#d62728\"/>\n";
  }
  os << "</g>\n";

  os << "<g id=\"agents\" fill=\"none\">\n";
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const auto& a = s.agents[i];
    const char* color = kPalette[i % std::size(kPalette)];
    if (i < trajectories.size() && !trajectories[i].empty()) {
      const auto& tr = trajectories[i];
      os << "<polyline points=\"";
      for (std::size_t k = 0; k < tr.size(); ++k) os << (k ? " " : "") << fmt(cx(tr[k])) << ',' << fmt(cy(tr[k]));
      os << "\" stroke=\"" << color << "\" stroke-width=\"" << fmt(px / 4) << "\"/>\n";
      const GridIndex now = tr[static_cast<std::size_t>(std::clamp<int>(tick, 0, static_cast<int>(tr.size()) - 1))];
      os << "<circle cx=\"" << fmt(cx(now)) << "\" cy=\"" << fmt(cy(now)) << "\" r=\"" << fmt(px * 0.4)
         << "\" fill=\"" << color << "\"/>\n";
    }
    os << "<rect x=\"" << fmt(a.start.x * px + px * 0.2) << "\" y=\"" << fmt(a.start.y * px + px * 0.2)
       << "\" width=\"" << fmt(px * 0.6) << "\" height=\"" << fmt(px * 0.6) << "\" stroke=\"" << color << "\"/>\n";
    os << "<path d=\"M " << fmt(a.goal.x * px + px * 0.2) << ' ' << fmt(a.goal.y * px + px * 0.2) << " L "
       << fmt(a.goal.x * px + px * 0.8) << ' ' << fmt(a.goal.y * px + px * 0.8) << " M "
       << fmt(a.goal.x * px + px * 0.8) << ' ' << fmt(a.goal.y * px + px * 0.2) << " L "
       << fmt(a.goal.x * px + px * 0.2) << ' ' << fmt(a.goal.y * px + px * 0.8) << "\" stroke=\"" << color
       << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace aspt::harness
