#pragma once

#include <vector>

#include "lawshield/world.hpp"

namespace lawshield {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Cubic Hermite segment on the unit parameter. Tangents are in meters
/// per unit parameter; divide the analytic derivative by the physical
/// duration to recover velocity.
struct HermiteSpec {
  Vec2 p0;
  Vec2 p1;
  Vec2 m0;
  Vec2 m1;
};

Vec2 hermite_point(const HermiteSpec& spec, double t);
Vec2 hermite_tangent(const HermiteSpec& spec, double t);

struct TrajectoryParams {
  double horizon = 3.0;   // seconds per long-term action
  double dt = 0.1;
  double a_max = 3.0;     // m/s^2 at |p_lon| = 1
  double v_max = 12.0;    // scenario speed limit
};

/// A long-term action: the (lane offset, normalized acceleration)
/// target and the trace it expands to. traj[0] is the decision state.
struct Candidate {
  ActionTarget target;
  Trace traj;
};

/// World-frame endpoint spec for a target: trapezoidal longitudinal
/// closure, target-lane center laterally, zero lateral end speed.
HermiteSpec target_to_world(const WorldState& s0, ActionTarget a, const RoadMap& map,
                            const TrajectoryParams& params);

/// Expands a target into a candidate trace against the predicted other
/// vehicle states (one per step, prediction[0] at s0's time). The
/// indicator follows the lateral intent: right during rightward moves,
/// left during leftward moves, continuing s0's duration when unchanged.
Candidate generate_candidate(const WorldState& s0, ActionTarget a, const RoadMap& map,
                             const std::vector<VehicleState>& prediction,
                             const TrajectoryParams& params);

}  // namespace lawshield
