#include "aspt/risk_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aspt {

void RiskConfig::validate() const {
  if (!(roi > 0.0)) throw std::invalid_argument("roi must be positive");
  if (!(roi_crit >= 0.0)) throw std::invalid_argument("roi_crit must be non-negative");
  if (!(roi_crit < roi)) throw std::invalid_argument("roi_crit must be smaller than roi");
  if (!(unknown_risk > 0.0)) throw std::invalid_argument("unknown_risk must be positive");
  if (!(cone_angle >= 0.0)) throw std::invalid_argument("cone_angle must be non-negative");
}

RiskConfig RiskConfig::in_meters(double resolution) const {
  RiskConfig out = *this;
  out.roi = roi * resolution;
  out.roi_crit = roi_crit * resolution;
  return out;
}

double occupancy_risk(CellState state, const RiskConfig& config) {
  switch (state) {
    case CellState::Occupied:
      return kInfiniteRisk;
    case CellState::Free:
      return 0.0;
    case CellState::Unknown:
      return config.unknown_risk;
  }
  return kInfiniteRisk;
}

double proximity_formula(double d, double roi) noexcept { return 99.0 - (d - 1.0) * (98.0 / roi); }

double proximity_risk(double d, const RiskConfig& config) {
  if (d < config.roi_crit) return kInfiniteRisk;
  if (d > config.roi) return 0.0;
  return std::clamp(proximity_formula(d, config.roi), kMinFiniteRisk, 100.0 - kMinFiniteRisk);
}

StaticRiskField::StaticRiskField(int width, int height, RiskConfig config, std::vector<double> occupancy,
                                 std::vector<double> proximity, std::vector<double> nearest_occupied)
    : width_(width),
      height_(height),
      config_(config),
      occupancy_(std::move(occupancy)),
      proximity_(std::move(proximity)),
      nearest_(std::move(nearest_occupied)) {
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (occupancy_.size() != n || proximity_.size() != n || nearest_.size() != n) {
    throw std::invalid_argument("risk layer size does not match field dimensions");
  }
}

StaticRiskField StaticRiskField::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
  StaticRiskField out = *this;
  for (auto* layer : {&out.occupancy_, &out.proximity_}) {
    for (double& r : *layer) {
      if (std::isfinite(r)) r *= factor;
    }
  }
  return out;
}

namespace {

constexpr long long kNoSite = -1;

/// Lower envelope of parabolas (x - q)^2 + g[q] over the finite entries of g.
void envelope_pass(const std::vector<long long>& g, std::vector<long long>& out) {
  const int n = static_cast<int>(g.size());
  std::vector<int> sites;
  std::vector<double> bounds;
  sites.reserve(n);
  bounds.reserve(n + 1);

  auto intersect = [&](int r, int q) {
    const double num = static_cast<double>((g[q] + static_cast<long long>(q) * q) - (g[r] + static_cast<long long>(r) * r));
    return num / (2.0 * (q - r));
  };

  for (int q = 0; q < n; ++q) {
    if (g[q] == kNoSite) continue;
    if (sites.empty()) {
      sites.push_back(q);
      bounds.push_back(-std::numeric_limits<double>::infinity());
      continue;
    }
    double s = intersect(sites.back(), q);
    while (s <= bounds.back()) {
      sites.pop_back();
      bounds.pop_back();
      if (sites.empty()) break;
      s = intersect(sites.back(), q);
    }
    if (sites.empty()) {
      sites.push_back(q);
      bounds.push_back(-std::numeric_limits<double>::infinity());
    } else {
      sites.push_back(q);
      bounds.push_back(s);
    }
  }

  if (sites.empty()) {
    std::fill(out.begin(), out.end(), kNoSite);
    return;
  }
  std::size_t k = 0;
  for (int x = 0; x < n; ++x) {
    while (k + 1 < sites.size() && bounds[k + 1] < x) ++k;
    const long long dx = x - sites[k];
    out[x] = dx * dx + g[sites[k]];
  }
}

}  // namespace

std::vector<long long> squared_distance_transform(const GridMap& map) {
  const int w = map.width();
  const int h = map.height();
  std::vector<long long> column_pass(map.cell_count(), kNoSite);

  // Column pass: squared vertical distance to the nearest occupied cell in the same column.
  for (int x = 0; x < w; ++x) {
    long long last = kNoSite;
    for (int y = 0; y < h; ++y) {
      if (map.at({x, y}) == CellState::Occupied) last = y;
      if (last != kNoSite) column_pass[map.index_of({x, y})] = (y - last) * (y - last);
    }
    last = kNoSite;
    for (int y = h - 1; y >= 0; --y) {
      if (map.at({x, y}) == CellState::Occupied) last = y;
      if (last == kNoSite) continue;
      auto& cell = column_pass[map.index_of({x, y})];
      const long long d = (last - y) * (last - y);
      if (cell == kNoSite || d < cell) cell = d;
    }
  }

  std::vector<long long> result(map.cell_count(), kNoSite);
  std::vector<long long> row(static_cast<std::size_t>(w));
  std::vector<long long> row_out(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) row[x] = column_pass[map.index_of({x, y})];
    envelope_pass(row, row_out);
    for (int x = 0; x < w; ++x) result[map.index_of({x, y})] = row_out[x];
  }
  return result;
}

StaticRiskField build_static_field(const GridMap& map, const RiskConfig& config) {
  config.validate();
  const auto squared = squared_distance_transform(map);
  std::vector<double> occupancy(map.cell_count());
  std::vector<double> proximity(map.cell_count());
  std::vector<double> nearest(map.cell_count());
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    const CellState state = map.cells()[i];
    occupancy[i] = occupancy_risk(state, config);
    nearest[i] = squared[i] == kNoSite ? std::numeric_limits<double>::infinity()
                                       : std::sqrt(static_cast<double>(squared[i]));
    proximity[i] = state == CellState::Occupied ? kInfiniteRisk : proximity_risk(nearest[i], config);
  }
  return StaticRiskField(map.width(), map.height(), config, std::move(occupancy), std::move(proximity),
                         std::move(nearest));
}

std::string export_risk_pgm(const StaticRiskField& field) {
  std::string out = "P5\n" + std::to_string(field.width()) + " " + std::to_string(field.height()) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(field.width()) * field.height());
  for (int y = 0; y < field.height(); ++y) {
    for (int x = 0; x < field.width(); ++x) {
      const double r = field.combined({x, y});
      unsigned char gray = 0;
      if (std::isfinite(r)) {
        const double t = std::clamp(r, 0.0, 100.0) / 100.0;
        gray = static_cast<unsigned char>(std::lround(255.0 * (1.0 - t)));
      }
      out.push_back(static_cast<char>(gray));
    }
  }
  return out;
}

}  // namespace aspt
