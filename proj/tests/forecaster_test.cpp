#include <doctest.h>

#include "lawshield/forecaster.hpp"
#include "lawshield/predicates.hpp"
#include "lawshield/trajectory.hpp"

using namespace lawshield;

namespace {

struct OlympicRig {
  RoadMap map;
  LawFile law;
  TrajectoryParams params;

  OlympicRig()
      : law(LawFile::load(std::string(LAWS_DIR) + "/event_lane.law", builtin_registry())) {
    map.lane_count = 3;
    map.lane_width = 3.5;
    map.special = {true, false, false};
    map.direction = {1, 1, 1};
    params.v_max = 12.0;
  }

  ltl::EvalContext ctx() const {
    ltl::EvalContext c = law.context(builtin_registry());
    c.flags["prescribed"] = 0.0;
    return c;
  }

  WorldState start(int lane = 1, double vx = 8.0) const {
    WorldState s;
    s.map = &map;
    s.ego.y = map.lane_center(lane);
    s.ego.vx = vx;
    s.other.y = map.lane_center(1);
    s.other.x = 60.0;
    s.other.vx = 4.0;
    return s;
  }

  std::vector<VehicleState> prediction(const WorldState& s0) const {
    std::vector<VehicleState> out;
    VehicleState o = s0.other;
    for (int k = 0; k <= 30; ++k) {
      out.push_back(o);
      o.x += o.vx * params.dt;
    }
    return out;
  }

  Forecaster forecaster() const {
    return Forecaster(law, ctx(), map, params.dt, params.v_max);
  }
};

}  // namespace

TEST_CASE("recoverability_check") {
  OlympicRig rig;
  WorldState s0 = rig.start();

  SUBCASE("every generator output passes") {
    for (int lat : {-1, 0, 1}) {
      for (double lon : {-1.0, 0.0, 1.0}) {
        Candidate c =
            generate_candidate(s0, {lat, lon}, rig.map, rig.prediction(s0), rig.params);
        CHECK(recoverability_check(c.traj, rig.map, rig.params.v_max));
      }
    }
  }
  SUBCASE("mid-lane-change end state fails") {
    Trace t(0.1);
    WorldState s = s0;
    s.ego.vy = 1.0;
    t.append_state(s);
    CHECK_FALSE(recoverability_check(t, rig.map, rig.params.v_max));
  }
  SUBCASE("overspeed end state fails") {
    Trace t(0.1);
    WorldState s = s0;
    s.ego.vx = rig.params.v_max + 1.0;
    t.append_state(s);
    CHECK_FALSE(recoverability_check(t, rig.map, rig.params.v_max));
  }
  SUBCASE("off-center end state fails") {
    Trace t(0.1);
    WorldState s = s0;
    s.ego.y = rig.map.lane_center(1) + 0.5;
    t.append_state(s);
    CHECK_FALSE(recoverability_check(t, rig.map, rig.params.v_max));
  }
}

TEST_CASE("check vets candidates against history + future") {
  OlympicRig rig;
  Forecaster fc = rig.forecaster();
  WorldState s0 = rig.start();
  fc.history().append({s0, std::nullopt, PolicyTag::None});

  SUBCASE("lane keeping in a legal lane is legal") {
    Candidate keep = generate_candidate(s0, {0, 0.0}, rig.map, rig.prediction(s0), rig.params);
    CheckResult r = fc.check(keep);
    CHECK(r.legal);
  }
  SUBCASE("a left lane change into the event lane is vetoed with a reason") {
    Candidate into_special =
        generate_candidate(s0, {-1, 0.0}, rig.map, rig.prediction(s0), rig.params);
    CheckResult r = fc.check(into_special);
    CHECK_FALSE(r.legal);
    CHECK(r.veto_path.find("on_special_lane") != std::string::npos);
    CHECK(r.veto_step > 0);
  }
  SUBCASE("check is pure: identical calls agree") {
    Candidate c = generate_candidate(s0, {-1, 0.0}, rig.map, rig.prediction(s0), rig.params);
    CheckResult a = fc.check(c);
    CheckResult b = fc.check(c);
    CHECK(a.legal == b.legal);
    CHECK(a.veto_path == b.veto_path);
    CHECK(a.veto_step == b.veto_step);
  }
  SUBCASE("misaligned candidate start is an error") {
    WorldState shifted = s0;
    shifted.ego.x += 1.0;
    Candidate c =
        generate_candidate(shifted, {0, 0.0}, rig.map, rig.prediction(shifted), rig.params);
    CHECK_THROWS_AS(fc.check(c), Error);
  }
}

TEST_CASE("decide realizes the three switch cases") {
  OlympicRig rig;
  Forecaster fc = rig.forecaster();
  WorldState s0 = rig.start();
  fc.history().append({s0, std::nullopt, PolicyTag::None});

  Candidate keep = generate_candidate(s0, {0, 0.0}, rig.map, rig.prediction(s0), rig.params);
  Candidate illegal = generate_candidate(s0, {-1, 0.0}, rig.map, rig.prediction(s0), rig.params);

  SUBCASE("case 1: legal RL action is taken and buffered") {
    Decision d = fc.decide(keep, nullptr);
    CHECK(d.tag == PolicyTag::Rl);
    CHECK(d.start == 1);
    CHECK(fc.buffer().candidate.target == keep.target);
  }
  SUBCASE("case 2: illegal RL falls back to the backup candidate") {
    bool consulted = false;
    Decision d = fc.decide(illegal, [&]() -> std::optional<Candidate> {
      consulted = true;
      return keep;
    });
    CHECK(consulted);
    CHECK(d.tag == PolicyTag::Backup);
    CHECK(d.rl_check.has_value());
    CHECK_FALSE(d.rl_check->legal);
  }
  SUBCASE("case 3: both vetoed, the buffer carries on unchanged") {
    Decision first = fc.decide(keep, nullptr);
    CHECK(first.tag == PolicyTag::Rl);
    // realize the first window so history stays aligned
    for (std::size_t j = 0; j < Forecaster::kTrackSteps; ++j) {
      fc.history().append((*first.traj)[first.start + j]);
    }
    ActionTarget buffered = fc.buffer().candidate.target;
    WorldState now = fc.history().last_state();
    Candidate illegal_now =
        generate_candidate(now, {-1, 0.0}, rig.map, rig.prediction(now), rig.params);
    Decision second =
        fc.decide(illegal_now, []() -> std::optional<Candidate> { return std::nullopt; });
    CHECK(second.tag == PolicyTag::Buffer);
    CHECK(second.start == 1 + Forecaster::kTrackSteps);
    CHECK(fc.buffer().candidate.target == buffered);
  }
  SUBCASE("an exhausted buffer with both candidates vetoed fails loudly") {
    Decision d = fc.decide(keep, nullptr);
    auto none = []() -> std::optional<Candidate> { return std::nullopt; };
    for (int window = 1; window < 6; ++window) {
      for (std::size_t j = 0; j < Forecaster::kTrackSteps; ++j) {
        fc.history().append((*d.traj)[d.start + j]);
      }
      WorldState now = fc.history().last_state();
      Candidate illegal_now =
          generate_candidate(now, {-1, 0.0}, rig.map, rig.prediction(now), rig.params);
      d = fc.decide(illegal_now, none);
      CHECK(d.tag == PolicyTag::Buffer);
    }
    for (std::size_t j = 0; j < Forecaster::kTrackSteps; ++j) {
      fc.history().append((*d.traj)[d.start + j]);
    }
    WorldState now = fc.history().last_state();
    Candidate illegal_now =
        generate_candidate(now, {-1, 0.0}, rig.map, rig.prediction(now), rig.params);
    CHECK_THROWS_AS(fc.decide(illegal_now, none), Error);
  }
}
