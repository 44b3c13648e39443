#include <doctest.h>

#include <cmath>

#include "lawshield/trajectory.hpp"

using namespace lawshield;

namespace {

RoadMap three_lanes() {
  RoadMap map;
  map.lane_count = 3;
  map.lane_width = 3.5;
  map.special.assign(3, false);
  map.direction.assign(3, 1);
  return map;
}

WorldState ego_at(const RoadMap& map, int lane, double vx) {
  WorldState s;
  s.map = &map;
  s.ego.y = map.lane_center(lane);
  s.ego.vx = vx;
  s.other.y = map.lane_center(map.lane_count - 1);
  s.other.x = 1000.0;  // far away
  return s;
}

std::vector<VehicleState> flat_prediction(const WorldState& s0, std::size_t n) {
  std::vector<VehicleState> out(n, s0.other);
  return out;
}

}  // namespace

TEST_CASE("hermite endpoint interpolation") {
  HermiteSpec spec{{1.0, 2.0}, {7.0, -3.0}, {4.0, 0.5}, {2.0, 0.0}};
  Vec2 a = hermite_point(spec, 0.0);
  Vec2 b = hermite_point(spec, 1.0);
  CHECK(std::abs(a.x - spec.p0.x) < 1e-12);
  CHECK(std::abs(a.y - spec.p0.y) < 1e-12);
  CHECK(std::abs(b.x - spec.p1.x) < 1e-12);
  CHECK(std::abs(b.y - spec.p1.y) < 1e-12);

  CHECK_THROWS_AS(hermite_point(spec, -0.01), Error);
  CHECK_THROWS_AS(hermite_point(spec, 1.01), Error);
}

TEST_CASE("degenerate straight-line configuration") {
  HermiteSpec spec{{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
  for (double t = 0.0; t <= 1.0; t += 0.05) {
    Vec2 p = hermite_point(spec, t);
    CHECK(std::abs(p.x - t) < 1e-12);
    CHECK(std::abs(p.y) < 1e-12);
  }
}

TEST_CASE("analytic tangent matches central finite differences") {
  HermiteSpec spec{{0.0, 1.75}, {24.0, 5.25}, {24.0, 0.0}, {30.0, 0.0}};
  const double h = 1e-6;
  for (double t = h; t <= 1.0 - h; t += 0.07) {
    Vec2 exact = hermite_tangent(spec, t);
    Vec2 hi = hermite_point(spec, t + h);
    Vec2 lo = hermite_point(spec, t - h);
    CHECK(std::abs(exact.x - (hi.x - lo.x) / (2 * h)) < 1e-6);
    CHECK(std::abs(exact.y - (hi.y - lo.y) / (2 * h)) < 1e-6);
  }
  SUBCASE("tangent equals the endpoint derivatives") {
    Vec2 m0 = hermite_tangent(spec, 0.0);
    Vec2 m1 = hermite_tangent(spec, 1.0);
    CHECK(m0.x == doctest::Approx(spec.m0.x).epsilon(1e-12));
    CHECK(m0.y == doctest::Approx(spec.m0.y).epsilon(1e-12));
    CHECK(m1.x == doctest::Approx(spec.m1.x).epsilon(1e-12));
    CHECK(m1.y == doctest::Approx(spec.m1.y).epsilon(1e-12));
  }
}

TEST_CASE("target_to_world kinematic closure") {
  RoadMap map = three_lanes();
  TrajectoryParams params;  // T=3, a_max=3, v_max=12

  SUBCASE("constant-speed straight target") {
    WorldState s0 = ego_at(map, 1, 10.0);
    HermiteSpec spec = target_to_world(s0, {0, 0.0}, map, params);
    CHECK(spec.p1.x == doctest::Approx(s0.ego.x + 30.0));
    CHECK(spec.p1.y == doctest::Approx(s0.ego.y));
    CHECK(spec.m1.x == doctest::Approx(10.0 * 3.0));
    CHECK(spec.m1.y == 0.0);
  }
  SUBCASE("left lane change from lane 1") {
    WorldState s0 = ego_at(map, 1, 10.0);
    HermiteSpec spec = target_to_world(s0, {-1, 0.0}, map, params);
    CHECK(spec.p1.y == doctest::Approx(map.lane_center(0)));
    CHECK(spec.p1.y - spec.p0.y == doctest::Approx(-3.5));
  }
  SUBCASE("full acceleration reaches v0 + a_max*T unless clamped") {
    WorldState s0 = ego_at(map, 1, 10.0);
    params.v_max = 25.0;
    HermiteSpec spec = target_to_world(s0, {0, 1.0}, map, params);
    CHECK(spec.m1.x / params.horizon == doctest::Approx(19.0));
    params.v_max = 12.0;
    spec = target_to_world(s0, {0, 1.0}, map, params);
    CHECK(spec.m1.x / params.horizon == doctest::Approx(12.0));
  }
  SUBCASE("hard braking clamps at standstill") {
    WorldState s0 = ego_at(map, 1, 4.0);
    HermiteSpec spec = target_to_world(s0, {0, -1.0}, map, params);
    CHECK(spec.m1.x == 0.0);
  }
  SUBCASE("nonexistent target lane") {
    WorldState s0 = ego_at(map, 0, 10.0);
    CHECK_THROWS_AS(target_to_world(s0, {-1, 0.0}, map, params), Error);
  }
}

TEST_CASE("generate_candidate") {
  RoadMap map = three_lanes();
  TrajectoryParams params;
  WorldState s0 = ego_at(map, 1, 10.0);

  SUBCASE("step count is ceil(T/dt) + 1") {
    Candidate c = generate_candidate(s0, {0, 0.0}, map, flat_prediction(s0, 31), params);
    CHECK(c.traj.size() == 31);
  }
  SUBCASE("prediction shorter than the horizon is an error") {
    CHECK_THROWS_AS(generate_candidate(s0, {0, 0.0}, map, flat_prediction(s0, 30), params), Error);
  }
  SUBCASE("straight constant-speed candidate has zero lateral speed everywhere") {
    Candidate c = generate_candidate(s0, {0, 0.0}, map, flat_prediction(s0, 31), params);
    for (std::size_t i = 0; i < c.traj.size(); ++i) {
      CHECK(c.traj.state(i).ego.vy == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(c.traj.state(i).ego.vx == doctest::Approx(10.0).epsilon(1e-12));
    }
  }
  SUBCASE("lane-change candidate ends at the target center with vy = 0") {
    Candidate c = generate_candidate(s0, {-1, 0.0}, map, flat_prediction(s0, 31), params);
    const VehicleState& end = c.traj.back().state.ego;
    CHECK(std::abs(end.y - map.lane_center(0)) < 1e-9);
    CHECK(std::abs(end.vy) < 1e-9);
  }
  SUBCASE("longitudinal speed is linear between v0 and v1") {
    params.v_max = 25.0;
    Candidate c = generate_candidate(s0, {0, 0.5}, map, flat_prediction(s0, 31), params);
    double v1 = c.traj.back().state.ego.vx;
    CHECK(v1 == doctest::Approx(14.5));
    for (std::size_t k = 0; k < c.traj.size(); ++k) {
      double u = static_cast<double>(k) / 30.0;
      CHECK(c.traj.state(k).ego.vx == doctest::Approx(10.0 * (1 - u) + v1 * u).epsilon(1e-9));
    }
  }
  SUBCASE("indicator follows the lateral intent and accumulates") {
    Candidate right = generate_candidate(s0, {1, 0.0}, map, flat_prediction(s0, 31), params);
    CHECK(right.traj.state(1).ego.indicator == Indicator::Right);
    CHECK(right.traj.state(1).ego.indicator_time == doctest::Approx(0.0));
    CHECK(right.traj.state(30).ego.indicator_time == doctest::Approx(2.9).epsilon(1e-9));

    Candidate keep = generate_candidate(s0, {0, 0.0}, map, flat_prediction(s0, 31), params);
    CHECK(keep.traj.state(5).ego.indicator == Indicator::Off);

    // already signalling: the duration carries on
    WorldState signalling = s0;
    signalling.ego.indicator = Indicator::Right;
    signalling.ego.indicator_time = 1.0;
    Candidate cont =
        generate_candidate(signalling, {1, 0.0}, map, flat_prediction(signalling, 31), params);
    CHECK(cont.traj.state(1).ego.indicator_time == doctest::Approx(1.1));
  }
  SUBCASE("lateral coordinate is monotone across the sampled action grid") {
    for (double vx : {2.0, 6.0, 10.0, 12.0}) {
      for (int lat : {-1, 1}) {
        for (double lon : {-1.0, -0.4, 0.0, 0.2, 1.0}) {
          WorldState s = ego_at(map, 1, vx);
          Candidate c = generate_candidate(s, {lat, lon}, map, flat_prediction(s, 31), params);
          for (std::size_t k = 1; k < c.traj.size(); ++k) {
            double dy = c.traj.state(k).ego.y - c.traj.state(k - 1).ego.y;
            CHECK(dy * lat >= -1e-9);
          }
        }
      }
    }
  }
}
