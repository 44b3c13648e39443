#include "lawshield/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace lawshield {

Vec2 hermite_point(const HermiteSpec& spec, double t) {
  if (t < 0.0 || t > 1.0) throw Error("hermite parameter outside [0,1]");
  double t2 = t * t;
  double t3 = t2 * t;
  double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  double h10 = t3 - 2.0 * t2 + t;
  double h01 = -2.0 * t3 + 3.0 * t2;
  double h11 = t3 - t2;
  return {h00 * spec.p0.x + h10 * spec.m0.x + h01 * spec.p1.x + h11 * spec.m1.x,
          h00 * spec.p0.y + h10 * spec.m0.y + h01 * spec.p1.y + h11 * spec.m1.y};
}

Vec2 hermite_tangent(const HermiteSpec& spec, double t) {
  if (t < 0.0 || t > 1.0) throw Error("hermite parameter outside [0,1]");
  double t2 = t * t;
  double h00 = 6.0 * t2 - 6.0 * t;
  double h10 = 3.0 * t2 - 4.0 * t + 1.0;
  double h01 = -6.0 * t2 + 6.0 * t;
  double h11 = 3.0 * t2 - 2.0 * t;
  return {h00 * spec.p0.x + h10 * spec.m0.x + h01 * spec.p1.x + h11 * spec.m1.x,
          h00 * spec.p0.y + h10 * spec.m0.y + h01 * spec.p1.y + h11 * spec.m1.y};
}

HermiteSpec target_to_world(const WorldState& s0, ActionTarget a, const RoadMap& map,
                            const TrajectoryParams& params) {
  int lane0 = lane_of(s0.ego, map);
  int lane1 = lane0 + a.p_lat;
  if (!map.lane_exists(lane1)) {
    throw Error("target lane does not exist: " + std::to_string(lane1));
  }
  double T = params.horizon;
  double v0 = s0.ego.vx;
  double a_cmd = a.p_lon * params.a_max;
  double v1 = std::clamp(v0 + a_cmd * T, 0.0, params.v_max);

  HermiteSpec spec;
  spec.p0 = {s0.ego.x, s0.ego.y};
  spec.p1 = {s0.ego.x + 0.5 * (v0 + v1) * T, map.lane_center(lane1)};
  spec.m0 = {v0 * T, s0.ego.vy * T};
  spec.m1 = {v1 * T, 0.0};
  return spec;
}

Candidate generate_candidate(const WorldState& s0, ActionTarget a, const RoadMap& map,
                             const std::vector<VehicleState>& prediction,
                             const TrajectoryParams& params) {
  const double T = params.horizon;
  const double dt = params.dt;
  const std::size_t n = static_cast<std::size_t>(std::ceil(T / dt - 1e-9)) + 1;
  if (prediction.size() < n) {
    throw Error("prediction horizon shorter than the trajectory horizon");
  }
  HermiteSpec spec = target_to_world(s0, a, map, params);

  double dy = spec.p1.y - spec.p0.y;
  Indicator intent = Indicator::Off;
  if (dy > 1e-9) intent = Indicator::Right;
  else if (dy < -1e-9) intent = Indicator::Left;

  Candidate cand;
  cand.target = a;
  cand.traj = Trace(dt);
  cand.traj.append({s0, a, PolicyTag::None});

  VehicleState prev = s0.ego;
  for (std::size_t k = 1; k < n; ++k) {
    double u = static_cast<double>(k) * dt / T;
    if (u > 1.0) u = 1.0;
    Vec2 p = hermite_point(spec, u);
    Vec2 m = hermite_tangent(spec, u);

    VehicleState ego = s0.ego;
    ego.x = p.x;
    ego.y = p.y;
    ego.vx = m.x / T;
    ego.vy = m.y / T;
    ego.indicator = intent;
    ego.indicator_time = next_indicator_time(prev, intent, dt);

    WorldState w;
    w.ego = ego;
    w.other = prediction[k];
    w.t = s0.t + static_cast<double>(k) * dt;
    w.map = s0.map;
    cand.traj.append({w, a, PolicyTag::None});
    prev = ego;
  }
  return cand;
}

}  // namespace lawshield
