#include "shearflow/state.hpp"

#include <cmath>
#include <stdexcept>

namespace shearflow {

void History::push(Snapshot s) {
  if (!snaps_.empty() && s.t <= snaps_.back().t)
    throw std::invalid_argument("History::push: times must increase");
  snaps_.push_back(std::move(s));
  while ((int)snaps_.size() > depth_) snaps_.pop_front();
}

bool History::uniform(int count) const {
  if (count <= 1) return true;
  if ((int)snaps_.size() < count) return false;
  const int first = (int)snaps_.size() - count;
  const double dt = snaps_[first + 1].t - snaps_[first].t;
  for (int i = first + 1; i + 1 < (int)snaps_.size(); ++i) {
    double d = snaps_[i + 1].t - snaps_[i].t;
    if (std::abs(d - dt) > 1e-12 * std::max(1.0, std::abs(dt))) return false;
  }
  return true;
}

double History::spacing() const {
  if (snaps_.size() < 2) return 0.0;
  return snaps_.back().t - snaps_[snaps_.size() - 2].t;
}

}  // namespace shearflow
