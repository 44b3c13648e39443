#include <doctest.h>

#include "lawshield/law.hpp"
#include "lawshield/predicates.hpp"

using namespace lawshield;

namespace {

RoadMap two_way_map() {
  RoadMap map;
  map.lane_count = 2;
  map.lane_width = 3.5;
  map.special = {false, false};
  map.direction = {-1, 1};
  return map;
}

// Ego slides from lane 0 to lane 1 over `steps` states with the given
// bumper gap at the crossing step and the right indicator on
// throughout (duration counted from step 0).
Trace turn_back_trace(const RoadMap& map, double gap_at_cross, double ego_vx, double other_vx,
                      std::size_t steps = 21) {
  Trace trace(0.1);
  double y0 = map.lane_center(0);
  double y1 = map.lane_center(1);
  VehicleState prev;
  for (std::size_t k = 0; k < steps; ++k) {
    WorldState s;
    s.map = &map;
    s.t = 0.1 * static_cast<double>(k);
    double u = static_cast<double>(k) / static_cast<double>(steps - 1);
    s.ego.y = y0 + (y1 - y0) * u;
    s.ego.x = ego_vx * s.t;
    s.ego.vx = ego_vx;
    s.ego.indicator = Indicator::Right;
    s.ego.indicator_time = k == 0 ? 0.0 : next_indicator_time(prev, Indicator::Right, 0.1);
    // the other (overtaken) vehicle trails so that the gap at the
    // crossing step (ego center on the line, mid-trace) equals
    // gap_at_cross
    double t_cross = 0.5 * static_cast<double>(steps - 1) * 0.1;
    double other_x_at_cross =
        ego_vx * t_cross - (gap_at_cross + 0.5 * (s.ego.length + s.other.length));
    s.other.y = map.lane_center(1);
    s.other.vx = other_vx;
    s.other.x = other_x_at_cross + other_vx * (s.t - t_cross);
    trace.append_state(s);
    prev = s.ego;
  }
  return trace;
}

ltl::EvalContext ctx_for(const LawFile& law, bool prescribed) {
  ltl::EvalContext ctx = law.context(builtin_registry());
  ctx.flags["prescribed"] = prescribed ? 1.0 : 0.0;
  return ctx;
}

}  // namespace

TEST_CASE("law files parse and all carry an outer Always") {
  for (const char* name :
       {"event_lane", "overtake_fixed", "overtake_variable", "overtake_mixed", "red_light"}) {
    LawFile law = LawFile::load(std::string(LAWS_DIR) + "/" + name + ".law", builtin_registry());
    CHECK(law.name() == name);
    CHECK(law.formula().op == ltl::Op::Always);
  }
}

TEST_CASE("law file error paths") {
  const auto& reg = builtin_registry();
  CHECK_THROWS_AS(LawFile::from_string("x", "formula: G(unknown_thing)", reg), ltl::ParseError);
  CHECK_THROWS_AS(LawFile::from_string("x", "const a 12\nformula: G(true)", reg), ltl::ParseError);
  CHECK_THROWS_AS(LawFile::from_string("x", "const a = 12", reg), ltl::ParseError);
  CHECK_THROWS_AS(
      LawFile::from_string("x", "formula: G( gap_gt(d_unbound) )", reg), ltl::ParseError);
}

TEST_CASE("event-lane law over simple traces") {
  LawFile law = LawFile::load(std::string(LAWS_DIR) + "/event_lane.law", builtin_registry());
  RoadMap map;
  map.lane_count = 3;
  map.lane_width = 3.5;
  map.special = {true, false, false};
  map.direction = {1, 1, 1};

  Trace legal(0.1), illegal(0.1);
  for (int k = 0; k < 5; ++k) {
    WorldState s;
    s.map = &map;
    s.t = 0.1 * k;
    s.other.y = map.lane_center(2);
    s.ego.y = map.lane_center(1);
    legal.append_state(s);
    s.ego.y = k == 3 ? map.lane_center(0) : map.lane_center(1);  // dips into the event lane
    illegal.append_state(s);
  }

  ltl::EvalContext ctx = ctx_for(law, false);
  CHECK(law.eval(legal, ctx) == 1);   // vacuous satisfaction
  CHECK(law.eval(illegal, ctx) == 0);

  SUBCASE("prescribed vehicles may use the lane") {
    ltl::EvalContext allowed = ctx_for(law, true);
    CHECK(law.eval(illegal, allowed) == 1);
  }
}

TEST_CASE("overtaking law, fixed threshold") {
  LawFile law = LawFile::load(std::string(LAWS_DIR) + "/overtake_fixed.law", builtin_registry());
  RoadMap map = two_way_map();
  ltl::EvalContext ctx = ctx_for(law, false);

  // hand evaluation of the digitized rule: the crossing happens with
  // the indicator on only ~1 s, so legality rests on the gap alone
  Trace cross_11 = turn_back_trace(map, 11.0, 10.0, 6.0);
  CHECK(law.eval(cross_11, ctx) == 0);

  Trace cross_15 = turn_back_trace(map, 15.0, 10.0, 6.0);
  CHECK(law.eval(cross_15, ctx) == 1);

  SUBCASE("gap exactly at the threshold is illegal (strict >)") {
    Trace cross_12 = turn_back_trace(map, 12.0, 10.0, 6.0);
    CHECK(law.eval(cross_12, ctx) == 0);
  }

  SUBCASE("a long-signalled crossing is legal regardless of gap") {
    // indicator accumulates from step 0; cross at ~3.5 s
    Trace slow_cross = turn_back_trace(map, 5.0, 10.0, 6.0, 71);
    CHECK(law.eval(slow_cross, ctx) == 1);
  }
}

TEST_CASE("rebind changes evaluation without reparsing") {
  LawFile law = LawFile::load(std::string(LAWS_DIR) + "/overtake_fixed.law", builtin_registry());
  RoadMap map = two_way_map();
  Trace cross_15 = turn_back_trace(map, 15.0, 10.0, 6.0);

  CHECK(law.eval(cross_15, ctx_for(law, false)) == 1);

  LawFile tightened = law.rebound("d_min", 20.0);
  CHECK(tightened.eval(cross_15, ctx_for(tightened, false)) == 0);
  CHECK(ltl::structurally_equal(law.formula(), tightened.formula()));

  SUBCASE("identity rebind changes nothing") {
    LawFile same = law.rebound("d_min", 12.0);
    CHECK(same.eval(cross_15, ctx_for(same, false)) == 1);
    Trace cross_11 = turn_back_trace(map, 11.0, 10.0, 6.0);
    CHECK(same.eval(cross_11, ctx_for(same, false)) == 0);
  }
  SUBCASE("unknown constant is an error") {
    CHECK_THROWS_AS(law.rebound("nope", 1.0), Error);
  }
}

TEST_CASE("variable threshold arithmetic: d_0 - tau * dv") {
  LawFile law = LawFile::load(std::string(LAWS_DIR) + "/overtake_variable.law", builtin_registry());
  RoadMap map = two_way_map();
  ltl::EvalContext ctx = ctx_for(law, false);

  // dv = 4 -> threshold 18 - 1.5*4 = 12.0
  Trace cross_121 = turn_back_trace(map, 12.1, 10.0, 6.0);
  CHECK(law.eval(cross_121, ctx) == 1);
  Trace cross_119 = turn_back_trace(map, 11.9, 10.0, 6.0);
  CHECK(law.eval(cross_119, ctx) == 0);

  SUBCASE("rebinding the reference distance moves the threshold") {
    LawFile wider = law.rebound("d_0", 20.0);  // threshold now 14
    CHECK(wider.eval(cross_121, ctx_for(wider, false)) == 0);
  }
}

TEST_CASE("mixed threshold takes the max of both rules") {
  LawFile law = LawFile::load(std::string(LAWS_DIR) + "/overtake_mixed.law", builtin_registry());
  RoadMap map = two_way_map();
  ltl::EvalContext ctx = ctx_for(law, false);

  // dv = 2 -> variable part 15, fixed part 12 -> effective 15
  Trace cross_14 = turn_back_trace(map, 14.0, 8.0, 6.0);
  CHECK(law.eval(cross_14, ctx) == 0);
  Trace cross_16 = turn_back_trace(map, 16.0, 8.0, 6.0);
  CHECK(law.eval(cross_16, ctx) == 1);

  // dv = 6 -> variable part 9, fixed 12 dominates
  Trace fast_cross_13 = turn_back_trace(map, 13.0, 12.0, 6.0);
  CHECK(law.eval(fast_cross_13, ctx) == 1);
}
