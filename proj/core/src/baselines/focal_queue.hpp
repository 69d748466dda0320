#pragma once

#include <cstddef>
#include <limits>
#include <set>
#include <tuple>
#include <unordered_map>

namespace aspt::baselines::detail {

/// OPEN ordered by (lower bound, OpenKey) plus a FOCAL subset of the entries whose
/// admission value is within omega of the smallest lower bound, ordered by FocalKey.
template <typename OpenKey, typename FocalKey>
class FocalQueue {
 public:
  explicit FocalQueue(double omega) : omega_(omega) {}

  void push(std::size_t id, double lower_bound, double admit, const OpenKey& open_key, const FocalKey& focal_key) {
    Item item{lower_bound, admit, open_key, focal_key, false};
    open_.emplace(lower_bound, open_key, id);
    if (admit <= threshold_ && lower_bound <= threshold_) {
      focal_.emplace(focal_key, id);
      item.in_focal = true;
    }
    items_.emplace(id, item);
  }

  void erase(std::size_t id) {
    const auto it = items_.find(id);
    if (it == items_.end()) return;
    const Item& item = it->second;
    open_.erase({item.lower_bound, item.open_key, id});
    if (item.in_focal) focal_.erase({item.focal_key, id});
    items_.erase(it);
  }

  bool contains(std::size_t id) const { return items_.count(id) != 0; }
  bool empty() const noexcept { return open_.empty(); }
  std::size_t size() const noexcept { return open_.size(); }
  double min_lower_bound() const { return std::get<0>(*open_.begin()); }

  std::size_t pop() {
    refresh();
    std::size_t id = 0;
    if (focal_.empty()) {
      id = std::get<2>(*open_.begin());
    } else {
      id = std::get<1>(*focal_.begin());
    }
    erase(id);
    return id;
  }

 private:
  struct Item {
    double lower_bound;
    double admit;
    OpenKey open_key;
    FocalKey focal_key;
    bool in_focal;
  };

  void refresh() {
    if (open_.empty()) return;
    const double bound = omega_ * min_lower_bound() + kSlack;
    if (bound < threshold_) {
      focal_.clear();
      for (auto& [id, item] : items_) item.in_focal = false;
      threshold_ = -std::numeric_limits<double>::infinity();
    }
    if (bound == threshold_) return;
    for (const auto& entry : open_) {
      if (std::get<0>(entry) > bound) break;
      const std::size_t id = std::get<2>(entry);
      Item& item = items_.at(id);
      if (!item.in_focal && item.admit <= bound) {
        focal_.emplace(item.focal_key, id);
        item.in_focal = true;
      }
    }
    threshold_ = bound;
  }

  static constexpr double kSlack = 1e-9;

  double omega_;
  double threshold_ = -std::numeric_limits<double>::infinity();
  std::set<std::tuple<double, OpenKey, std::size_t>> open_;
  std::set<std::tuple<FocalKey, std::size_t>> focal_;
  std::unordered_map<std::size_t, Item> items_;
};

}  // namespace aspt::baselines::detail
