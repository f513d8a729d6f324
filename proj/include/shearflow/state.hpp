#pragma once

#include <deque>

#include "shearflow/field.hpp"

namespace shearflow {

struct Snapshot {
  double t = 0.0;
  VectorVolumeField u;
  VolumeField p;
  SurfaceField eta;
  SurfaceField deta_dt;  // kinematic-equation value at this state
};

/// Bounded ring of past states for temporal finite differences, oldest first.
class History {
 public:
  explicit History(int depth = 5) : depth_(depth) {}
  int depth() const { return depth_; }
  int size() const { return (int)snaps_.size(); }
  const Snapshot& operator[](int i) const { return snaps_[i]; }
  const Snapshot& newest() const { return snaps_.back(); }
  void push(Snapshot s);
  /// true when the last n+1 snapshots are uniformly spaced (1e-12 relative)
  bool uniform(int count) const;
  double spacing() const;

 private:
  int depth_;
  std::deque<Snapshot> snaps_;
};

struct FlowState {
  double t = 0.0;
  VectorVolumeField u;
  VolumeField p;
  SurfaceField eta;
  SurfaceField deta_dt;
  History history{5};

  explicit FlowState(const Grid& g, int history_depth = 5)
      : u(g), p(g), eta(g), deta_dt(g), history(history_depth) {}
  FlowState() = default;
  const Grid& grid() const { return u.grid(); }
  Snapshot snapshot() const { return {t, u, p, eta, deta_dt}; }
};

}  // namespace shearflow
